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

#ifndef IFMSIM_MEASUREMENT_HPP
#define IFMSIM_MEASUREMENT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "ifmsim/fock_state.hpp"

namespace ifm {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Root of a family of reproducible random streams. Substream k is an
/// mt19937_64 seeded by a splitmix64 mix of (root, k), so parallel shots get
/// independent streams derived by counter with no shared state.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t root_seed) : root_(root_seed) {}

    std::uint64_t substream_seed(std::uint64_t index) const {
        return detail::splitmix64(detail::splitmix64(root_) + index);
    }

    std::mt19937_64 substream(std::uint64_t index) const {
        return std::mt19937_64(substream_seed(index));
    }

    std::uint64_t root() const { return root_; }

  private:
    std::uint64_t root_;
};

/// Uniform double in [0, 1) with 53 random bits. Written out instead of
/// uniform_real_distribution so sequences are identical across standard
/// library implementations.
inline double canonical_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Marginal Born distribution over the occupancy bits of a mode subset,
/// plus the decoherent `lost` mass.
struct BornDistribution {
    // keyed by bit tuple in the query order
    std::map<std::vector<int>, double> outcomes;
    double lost = 0.0;

    double total() const {
        double t = lost;
        for (const auto& [bits, p] : outcomes) t += p;
        return t;
    }
};

inline BornDistribution born_probabilities(const QuantumState& s, std::span<const ModeId> modes) {
    for (ModeId m : modes) {
        if (m >= s.num_modes()) throw std::invalid_argument("born_probabilities: unknown mode");
    }
    BornDistribution d;
    d.lost = s.loss_probability();
    std::vector<int> bits(modes.size());
    for (const auto& [cfg, amp] : s.terms()) {
        for (std::size_t k = 0; k < modes.size(); ++k) bits[k] = cfg.get(modes[k]) ? 1 : 0;
        d.outcomes[bits] += std::norm(amp);
    }
    return d;
}

inline BornDistribution born_probabilities(const QuantumState& s,
                                           std::initializer_list<ModeId> modes) {
    return born_probabilities(s, std::span<const ModeId>(modes.begin(), modes.size()));
}

enum class DetectOutcome { zero, one, lost };

struct DetectResult {
    DetectOutcome outcome;
    /// Born probability of the sampled outcome at the moment of detection.
    double probability;

    bool clicked() const { return outcome == DetectOutcome::one; }
    bool is_lost() const { return outcome == DetectOutcome::lost; }
};

/// Samples the occupancy of `mode` and collapses the state. When the loss
/// branch is drawn the detector never fires: the state is marked absorbed
/// and the caller should treat the run as inconclusive. Conditional on a
/// conclusive draw the kept subspace is renormalized and the loss sink
/// cleared (the click certifies no absorption happened).
inline DetectResult detect(QuantumState& s, ModeId mode, std::mt19937_64& rng) {
    if (mode >= s.num_modes()) throw std::invalid_argument("detect: unknown mode");
    const double p_lost = s.loss_probability();
    double p_one = 0.0;
    for (const auto& [cfg, amp] : s.terms()) {
        if (cfg.get(mode)) p_one += std::norm(amp);
    }
    const double p_zero = std::max(0.0, 1.0 - p_lost - p_one);
    if (p_lost >= 1.0 - 1e-14) {
        throw std::runtime_error("detect: all probability mass is lost");
    }
    const double u = canonical_double(rng);
    if (u < p_lost) {
        s.collapse_to_lost();
        return {DetectOutcome::lost, p_lost};
    }
    if (u < p_lost + p_one) {
        s.collapse(mode, 1);
        return {DetectOutcome::one, p_one};
    }
    s.collapse(mode, 0);
    return {DetectOutcome::zero, p_zero};
}

/// Deterministic collapse onto occupancy `bit` of `mode`. Returns the branch
/// probability; throws ZeroProbabilityError when the branch carries no mass.
/// Operates on the kept subspace only (the absorbed mass is never selected).
inline double postselect(QuantumState& s, ModeId mode, int bit) {
    return s.collapse(mode, bit);
}

/// Classical record of one sampled run.
struct ShotRecord {
    std::uint64_t seed = 0;
    std::vector<std::pair<ModeId, int>> outcomes;
    double final_kept_probability = 1.0;
    bool inconclusive = false;

    void record(ModeId m, const DetectResult& r) {
        if (r.is_lost()) {
            inconclusive = true;
            final_kept_probability *= r.probability;
            return;
        }
        outcomes.emplace_back(m, r.clicked() ? 1 : 0);
        final_kept_probability *= r.probability;
    }
};

}  // namespace ifm

#endif  // IFMSIM_MEASUREMENT_HPP
