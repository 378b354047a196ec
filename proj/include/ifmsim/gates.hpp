// Copyright 2026 The ifmsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IFMSIM_GATES_HPP
#define IFMSIM_GATES_HPP

#include <cmath>
#include <numbers>
#include <optional>

#include "ifmsim/fock_state.hpp"

namespace ifm {

/// Beam splitter angle with derived transmissivity/reflectivity.
/// R is computed as 1 - T so the two always sum to one exactly.
struct BeamSplitterParams {
    double theta;
    double transmissivity() const { return std::sin(theta) * std::sin(theta); }
    double reflectivity() const { return 1.0 - transmissivity(); }
};

/// Interaction-free gate wiring: an absorber travels on `control`, the probe
/// particle on rails (`target_a`, `target_b`). `stages` empty means the
/// ideal N -> infinity gate; otherwise N beam-splitter stages with
/// theta = pi / 2N.
struct IfmGateSpec {
    ModeId control;
    ModeId target_a;
    ModeId target_b;
    std::optional<int> stages;
};

/// Closed-form survival probability of the probe with the absorber present:
/// P(N) = cos^{2N}(pi / 2N).
inline double ifm_survival_probability(int stages) {
    if (stages < 1) throw std::invalid_argument("survival probability: stages must be >= 1");
    return std::pow(std::cos(std::numbers::pi / (2.0 * stages)), 2.0 * stages);
}

/// Two-mode beam splitter:
///   |1>_a |0>_b -> cos(theta) |1>_a |0>_b - sin(theta) |0>_a |1>_b
///   |0>_a |1>_b -> sin(theta) |1>_a |0>_b + cos(theta) |0>_a |1>_b
inline void beam_splitter(QuantumState& s, ModeId a, ModeId b, double theta) {
    const double c = std::cos(theta), sn = std::sin(theta);
    s.apply_two_mode_mixer(a, b, {{{Complex{c}, Complex{sn}}, {Complex{-sn}, Complex{c}}}});
}

/// The Hadamard beam splitter:
///   |0>_x |1>_y -> (|0>_x |1>_y + |1>_x |0>_y) / sqrt(2)
///   |1>_x |0>_y -> (|0>_x |1>_y - |1>_x |0>_y) / sqrt(2)
/// On a dual-rail qubit with rails (x = "1" rail, y = "0" rail) this is the
/// usual Hadamard transformation.
inline void hadamard_bs(QuantumState& s, ModeId x, ModeId y) {
    const double r = 1.0 / std::sqrt(2.0);
    s.apply_two_mode_mixer(x, y, {{{Complex{-r}, Complex{r}}, {Complex{r}, Complex{r}}}});
}

inline void hadamard_qubit(QuantumState& s, DualRailQubit q) {
    hadamard_bs(s, q.mode_a, q.mode_b);
}

/// sigma_x on a dual-rail qubit: exchange the rails.
inline void pauli_x(QuantumState& s, DualRailQubit q) { s.swap_modes(q.mode_a, q.mode_b); }

/// sigma_z on a dual-rail qubit: -1 on the |1> rail, realized as the
/// diagonal mixer diag(-1, 1) on (rail a, rail b).
inline void pauli_z(QuantumState& s, DualRailQubit q) {
    s.apply_two_mode_mixer(q.mode_a, q.mode_b,
                           {{{Complex{-1.0}, Complex{0.0}}, {Complex{0.0}, Complex{1.0}}}});
}

namespace detail {
inline void check_ifm_modes(const QuantumState& s, ModeId x, ModeId a, ModeId b) {
    if (x == a || x == b || a == b) {
        throw std::invalid_argument("ifm gate: modes must be distinct");
    }
    if (s.species(a) != s.species(b)) {
        throw std::invalid_argument("ifm gate: target rails carry different species");
    }
    if (!annihilating_pair(s.species(x), s.species(a))) {
        throw std::invalid_argument("ifm gate: control does not absorb the target species");
    }
}
}  // namespace detail

/// The N -> infinity interaction-free gate. Linear extension of
///   |0>_x |0>_a |1>_b ->  |0>_x |1>_a |0>_b
///   |1>_x |0>_a |1>_b ->  |1>_x |0>_a |1>_b
///   |0>_x |1>_a |0>_b -> -|0>_x |0>_a |1>_b
///   |1>_x |0>_a |0>_b ->  |1>_x |0>_a |0>_b
/// Terms with control and rail a both occupied are absorbed into the loss
/// sink (the input the gate symbol forbids; routing it to loss lets
/// superpositions degrade gracefully instead of erroring).
inline void ideal_ifm(QuantumState& s, ModeId x, ModeId a, ModeId b) {
    detail::check_ifm_modes(s, x, a, b);
    QuantumState::TermMap next;
    next.reserve(s.terms().size());
    double lost = 0.0;
    for (const auto& [cfg, amp] : s.terms()) {
        const bool bx = cfg.get(x), ba = cfg.get(a), bb = cfg.get(b);
        if (bx && ba) {
            lost += std::norm(amp);
            continue;
        }
        if (bx || ba == bb) {
            next[cfg] += amp;
            continue;
        }
        // control empty, one particle on the rails: quarter turn b -> a, a -> -b
        OccupationConfig c = cfg;
        c.set(a, !ba);
        c.set(b, !bb);
        next[c] += ba ? -amp : amp;
    }
    s.apply_term_map(std::move(next), lost);
}

/// Finite interferometer: N repetitions of a beam splitter at pi/2N followed
/// by the coincidence absorption against the (static) control particle.
/// With the control empty this reproduces the ideal gate exactly for every N
/// (N * theta = pi/2); with the control occupied the probe survives on rail b
/// with amplitude cos^N(pi/2N).
inline void finite_ifm(QuantumState& s, ModeId x, ModeId a, ModeId b, int stages) {
    detail::check_ifm_modes(s, x, a, b);
    if (stages < 1) throw std::invalid_argument("finite_ifm: stages must be >= 1");
    const double theta = std::numbers::pi / (2.0 * stages);
    for (int k = 0; k < stages; ++k) {
        beam_splitter(s, a, b, theta);
        s.annihilate_if_coincident(x, a);
    }
}

inline void apply_ifm(QuantumState& s, const IfmGateSpec& spec) {
    if (spec.stages) {
        finite_ifm(s, spec.control, spec.target_a, spec.target_b, *spec.stages);
    } else {
        ideal_ifm(s, spec.control, spec.target_a, spec.target_b);
    }
}

}  // namespace ifm

#endif  // IFMSIM_GATES_HPP
