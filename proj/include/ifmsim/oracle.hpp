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

#ifndef IFMSIM_ORACLE_HPP
#define IFMSIM_ORACLE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ifmsim/fock_state.hpp"

namespace ifm {

/// Textbook state-vector simulator on abstract qubits, used as brute-force
/// ground truth for the dual-rail circuits. Qubit 0 is the most significant
/// bit of the amplitude index, matching ket-string reading order: on three
/// qubits, |q0 q1 q2> = |011> sits at index 3.
///
/// Kept deliberately free of fock-core machinery beyond complex arithmetic,
/// so equivalence checks against it mean something.
class DenseState {
  public:
    explicit DenseState(int num_qubits) : n_(num_qubits), amps_(std::size_t{1} << num_qubits) {
        if (num_qubits < 1 || num_qubits > 20) {
            throw std::invalid_argument("DenseState: unsupported qubit count");
        }
        amps_[0] = 1.0;
    }

    static DenseState basis(int num_qubits, std::size_t index) {
        DenseState s(num_qubits);
        if (index >= s.dim()) throw std::invalid_argument("basis: index out of range");
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    static DenseState from_amplitudes(std::vector<Complex> amps) {
        int n = 0;
        while ((std::size_t{1} << n) < amps.size()) ++n;
        if ((std::size_t{1} << n) != amps.size()) {
            throw std::invalid_argument("from_amplitudes: size must be a power of two");
        }
        DenseState s(n);
        s.amps_ = std::move(amps);
        if (std::abs(s.norm() - 1.0) > 1e-9) {
            throw std::invalid_argument("from_amplitudes: not normalized");
        }
        return s;
    }

    int num_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    Complex amplitude(std::size_t index) const { return amps_.at(index); }
    const std::vector<Complex>& amplitudes() const { return amps_; }

    double norm() const {
        double p = 0.0;
        for (const Complex& a : amps_) p += std::norm(a);
        return std::sqrt(p);
    }

    void apply_h(int q) {
        const double r = 1.0 / std::sqrt(2.0);
        for_pairs(q, [r](Complex& a0, Complex& a1) {
            const Complex u = a0, v = a1;
            a0 = r * (u + v);
            a1 = r * (u - v);
        });
    }

    void apply_x(int q) {
        for_pairs(q, [](Complex& a0, Complex& a1) { std::swap(a0, a1); });
    }

    void apply_z(int q) {
        for_pairs(q, [](Complex&, Complex& a1) { a1 = -a1; });
    }

    void apply_cnot(int control, int target) {
        check_qubit(control);
        check_qubit(target);
        if (control == target) throw std::invalid_argument("cnot: qubits must differ");
        const std::size_t cm = bit_mask(control), tm = bit_mask(target);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if ((i & cm) && !(i & tm)) std::swap(amps_[i], amps_[i | tm]);
        }
    }

  private:
    void check_qubit(int q) const {
        if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    }

    std::size_t bit_mask(int q) const { return std::size_t{1} << (n_ - 1 - q); }

    template <typename F>
    void for_pairs(int q, F&& f) {
        check_qubit(q);
        const std::size_t m = bit_mask(q);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (!(i & m)) f(amps_[i], amps_[i | m]);
        }
    }

    int n_;
    std::vector<Complex> amps_;
};

/// |<psi|phi>|^2; insensitive to global phase on either argument.
inline double fidelity(const DenseState& a, const DenseState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    Complex ip = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        ip += std::conj(a.amplitude(i)) * b.amplitude(i);
    }
    return std::norm(ip);
}

/// Reads a loss-free dual-rail state into the dense representation, qubit k
/// taken from `qubits[k]` (|1> when rail a is occupied). Modes outside the
/// listed rails must be classical: identically occupied across all terms.
inline DenseState embed(const QuantumState& s, std::span<const DualRailQubit> qubits) {
    if (s.loss_probability() > 1e-12) {
        throw std::invalid_argument("embed: state carries loss");
    }
    if (qubits.empty() || s.terms().empty()) {
        throw std::invalid_argument("embed: nothing to embed");
    }
    std::vector<bool> is_rail(s.num_modes(), false);
    for (const DualRailQubit& q : qubits) {
        is_rail.at(q.mode_a) = true;
        is_rail.at(q.mode_b) = true;
    }
    const OccupationConfig& ref = s.terms().begin()->first;
    std::vector<Complex> amps(std::size_t{1} << qubits.size());
    for (const auto& [cfg, amp] : s.terms()) {
        std::size_t index = 0;
        for (const DualRailQubit& q : qubits) {
            index = (index << 1) | static_cast<unsigned>(qubit_bit(cfg, q));
        }
        for (std::size_t m = 0; m < s.num_modes(); ++m) {
            if (!is_rail[m] && cfg.get(m) != ref.get(m)) {
                throw std::invalid_argument("embed: non-qubit mode is not classical");
            }
        }
        amps[index] += amp;
    }
    return DenseState::from_amplitudes(std::move(amps));
}

inline DenseState embed(const QuantumState& s, std::initializer_list<DualRailQubit> qubits) {
    return embed(s, std::span<const DualRailQubit>(qubits.begin(), qubits.size()));
}

/// Haar-ish random amplitude vector over n qubits: complex Gaussian entries
/// (Box-Muller over a reproducible uniform source) normalized to 1.
template <typename Rng>
std::vector<Complex> random_state_amplitudes(Rng& rng, int num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<Complex> amps(dim);
    auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 2.0 * 3.14159265358979323846 * uniform();
        amps[i] = Complex{r * std::cos(phi), r * std::sin(phi)};
        norm2 += std::norm(amps[i]);
    }
    const double rescale = 1.0 / std::sqrt(norm2);
    for (Complex& a : amps) a *= rescale;
    return amps;
}

}  // namespace ifm

#endif  // IFMSIM_ORACLE_HPP
