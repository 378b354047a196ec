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

#ifndef IFMSIM_FOCK_STATE_HPP
#define IFMSIM_FOCK_STATE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ifm {

using Complex = std::complex<double>;
using ModeId = std::uint32_t;

/// Amplitudes smaller than this are dropped after an operation. The discarded
/// probability per term is < 1e-30, far below the 1e-12 conservation budget.
inline constexpr double amplitude_prune_threshold = 1e-15;

/// |sum of |amp|^2 + loss - 1| must stay below this after every operation.
inline constexpr double conservation_tolerance = 1e-12;

/// Particle species carried by a spatial mode. `object` is the generic
/// absorber sitting in a photonic interferometer; electron/positron pairs
/// annihilate each other.
enum class Species { photon, electron, positron, object };

inline const char* to_string(Species s) {
    switch (s) {
        case Species::photon: return "photon";
        case Species::electron: return "electron";
        case Species::positron: return "positron";
        case Species::object: return "object";
    }
    return "?";
}

/// True for the two pairs that absorb each other on path coincidence.
inline bool annihilating_pair(Species a, Species b) {
    return (a == Species::electron && b == Species::positron) ||
           (a == Species::positron && b == Species::electron) ||
           (a == Species::photon && b == Species::object) ||
           (a == Species::object && b == Species::photon);
}

/// A labeled spatial path. The id is its registration index in the state.
struct ModeDescriptor {
    Species species;
    std::string label;
};

/// One occupancy bit per registered mode (0 = empty, 1 = one particle).
/// Fixed capacity; the owning register knows how many bits are live.
struct OccupationConfig {
    static constexpr std::size_t capacity = 128;
    std::array<std::uint64_t, 2> words{};

    bool get(std::size_t i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (v) {
            words[i >> 6] |= bit;
        } else {
            words[i >> 6] &= ~bit;
        }
    }
    bool operator==(const OccupationConfig& o) const { return words == o.words; }
    bool operator!=(const OccupationConfig& o) const { return !(*this == o); }

    /// Occupancy bits rendered in registration order, e.g. "010".
    std::string to_string(std::size_t num_modes) const {
        std::string s(num_modes, '0');
        for (std::size_t i = 0; i < num_modes; ++i) {
            if (get(i)) s[i] = '1';
        }
        return s;
    }
};

/// Builds a config from a bit string in registration order ("010" -> mode 1).
inline OccupationConfig make_config(std::string_view bits) {
    if (bits.size() > OccupationConfig::capacity) {
        throw std::invalid_argument("make_config: too many modes");
    }
    OccupationConfig c;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            c.set(i, true);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("make_config: bits must be 0/1");
        }
    }
    return c;
}

struct OccupationConfigHash {
    std::size_t operator()(const OccupationConfig& c) const {
        // splitmix64 finalizer over both words
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::uint64_t w : c.words) {
            std::uint64_t z = w + h;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            h = z ^ (z >> 31);
        }
        return static_cast<std::size_t>(h);
    }
};

/// An ordered pair of modes encoding one qubit: the particle sits on
/// `mode_a` in logical |1> and on `mode_b` in logical |0>.
struct DualRailQubit {
    ModeId mode_a;
    ModeId mode_b;
};

/// Raised when a measurement branch with (numerically) zero probability is
/// requested.
struct ZeroProbabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sparse occupation-number state over labeled modes. Absorption events move
/// probability into a single decoherent `loss_probability` scalar rather
/// than an amplitude: an absorbed particle reveals its path, so no coherence
/// with the surviving terms remains.
///
/// The invariant sum(|amp|^2) + loss_probability == 1 (within 1e-12) holds
/// after every operation. States are single-owner and mutated in place.
class QuantumState {
  public:
    using TermMap = std::unordered_map<OccupationConfig, Complex, OccupationConfigHash>;
    using Matrix2 = std::array<std::array<Complex, 2>, 2>;
    using AuditHook = void (*)(const QuantumState&);

    /// Empty register holding the vacuum with amplitude 1.
    QuantumState() { terms_.emplace(OccupationConfig{}, Complex{1.0, 0.0}); }

    /// Register `modes` and start in the single basis state `initial`.
    QuantumState(std::vector<ModeDescriptor> modes, const OccupationConfig& initial)
        : modes_(std::move(modes)) {
        validate_modes();
        require_in_register(initial, "initial occupancy");
        terms_.emplace(initial, Complex{1.0, 0.0});
        audit();
    }

    /// General state prep from (config, amplitude) pairs. The amplitudes must
    /// be normalized within `norm_tol`; they are rescaled to exact unit norm.
    static QuantumState from_terms(std::vector<ModeDescriptor> modes,
                                   const std::vector<std::pair<OccupationConfig, Complex>>& terms,
                                   double norm_tol = 1e-9) {
        QuantumState s;
        s.terms_.clear();
        s.modes_ = std::move(modes);
        s.validate_modes();
        double norm2 = 0.0;
        for (const auto& [cfg, amp] : terms) {
            s.require_in_register(cfg, "term occupancy");
            if (s.terms_.count(cfg)) {
                throw std::invalid_argument("from_terms: duplicate configuration");
            }
            s.terms_.emplace(cfg, amp);
            norm2 += std::norm(amp);
        }
        if (std::abs(norm2 - 1.0) > norm_tol) {
            throw std::invalid_argument("from_terms: amplitudes not normalized");
        }
        const double rescale = 1.0 / std::sqrt(norm2);
        for (auto& [cfg, amp] : s.terms_) amp *= rescale;
        s.prune();
        s.audit();
        return s;
    }

    /// Appends a fresh, unoccupied mode and returns its id.
    ModeId add_mode(ModeDescriptor d) {
        if (modes_.size() >= OccupationConfig::capacity) {
            throw std::invalid_argument("add_mode: register capacity exceeded");
        }
        modes_.push_back(std::move(d));
        return static_cast<ModeId>(modes_.size() - 1);
    }

    /// Places one particle on `m`, which must be empty in every term.
    void add_particle(ModeId m) {
        require_mode(m);
        for (const auto& [cfg, amp] : terms_) {
            if (cfg.get(m)) {
                throw std::invalid_argument("add_particle: mode already occupied");
            }
        }
        TermMap next;
        next.reserve(terms_.size());
        for (const auto& [cfg, amp] : terms_) {
            OccupationConfig c = cfg;
            c.set(m, true);
            next.emplace(c, amp);
        }
        terms_ = std::move(next);
        audit();
    }

    std::size_t num_modes() const { return modes_.size(); }
    const ModeDescriptor& mode(ModeId m) const {
        require_mode(m);
        return modes_[m];
    }
    Species species(ModeId m) const { return mode(m).species; }

    /// Stored amplitude of `config`, or exact zero.
    Complex amplitude(const OccupationConfig& config) const {
        require_in_register(config, "queried configuration");
        auto it = terms_.find(config);
        return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
    }

    double loss_probability() const { return loss_; }
    double kept_probability() const {
        double p = 0.0;
        for (const auto& [cfg, amp] : terms_) p += std::norm(amp);
        return p;
    }
    double total_probability() const { return kept_probability() + loss_; }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Applies a 2x2 unitary on the single-excitation subspace of (i, j).
    /// Basis order: index 0 = particle on i, index 1 = particle on j.
    /// Terms with (i, j) occupancy (0,0) or (1,1) pass through unchanged.
    void apply_two_mode_mixer(ModeId i, ModeId j, const Matrix2& u) {
        require_mode(i);
        require_mode(j);
        if (i == j) throw std::invalid_argument("mixer: modes must be distinct");
        require_unitary(u);
        TermMap next;
        next.reserve(2 * terms_.size());
        for (const auto& [cfg, amp] : terms_) {
            const bool bi = cfg.get(i), bj = cfg.get(j);
            if (bi == bj) {
                next[cfg] += amp;
                continue;
            }
            const int in = bi ? 0 : 1;
            OccupationConfig on_i = cfg, on_j = cfg;
            on_i.set(i, true);
            on_i.set(j, false);
            on_j.set(i, false);
            on_j.set(j, true);
            next[on_i] += u[0][in] * amp;
            next[on_j] += u[1][in] * amp;
        }
        terms_ = std::move(next);
        prune();
        audit();
    }

    /// Removes every term where both modes are occupied, accumulating its
    /// probability into the loss sink. Species must be an annihilating pair.
    /// Idempotent.
    void annihilate_if_coincident(ModeId control, ModeId target) {
        require_mode(control);
        require_mode(target);
        if (control == target) {
            throw std::invalid_argument("annihilate: modes must be distinct");
        }
        if (!annihilating_pair(species(control), species(target))) {
            throw std::invalid_argument(
                std::string("annihilate: species do not annihilate (") +
                to_string(species(control)) + ", " + to_string(species(target)) + ")");
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->first.get(control) && it->first.get(target)) {
                loss_ += std::norm(it->second);
                it = terms_.erase(it);
            } else {
                ++it;
            }
        }
        audit();
    }

    /// Relabels occupancy bits: the bit of mode k moves to image[k].
    /// The image must be a species-preserving bijection.
    void permute_modes(const std::vector<ModeId>& image) {
        if (image.size() != modes_.size()) {
            throw std::invalid_argument("permute: image size mismatch");
        }
        std::vector<bool> hit(modes_.size(), false);
        for (std::size_t k = 0; k < image.size(); ++k) {
            if (image[k] >= modes_.size() || hit[image[k]]) {
                throw std::invalid_argument("permute: not a bijection");
            }
            hit[image[k]] = true;
            if (modes_[k].species != modes_[image[k]].species) {
                throw std::invalid_argument("permute: species mismatch");
            }
        }
        TermMap next;
        next.reserve(terms_.size());
        for (const auto& [cfg, amp] : terms_) {
            OccupationConfig c;
            for (std::size_t k = 0; k < modes_.size(); ++k) {
                if (cfg.get(k)) c.set(image[k], true);
            }
            next.emplace(c, amp);
        }
        terms_ = std::move(next);
        audit();
    }

    /// Transposition of two modes' occupancy bits.
    void swap_modes(ModeId i, ModeId j) {
        require_mode(i);
        require_mode(j);
        if (i == j) return;
        std::vector<ModeId> image(modes_.size());
        for (std::size_t k = 0; k < image.size(); ++k) image[k] = static_cast<ModeId>(k);
        image[i] = j;
        image[j] = i;
        permute_modes(image);
    }

    /// Projects onto occupancy `bit` of `mode`, renormalizes the kept terms
    /// and clears the loss sink (a click rules the absorption branch out).
    /// Returns the branch probability. Throws ZeroProbabilityError if the
    /// branch carries no mass.
    double collapse(ModeId mode, int bit, double min_probability = 1e-14) {
        require_mode(mode);
        if (bit != 0 && bit != 1) throw std::invalid_argument("collapse: bit must be 0/1");
        double p = 0.0;
        for (const auto& [cfg, amp] : terms_) {
            if (cfg.get(mode) == (bit == 1)) p += std::norm(amp);
        }
        if (p < min_probability) {
            throw ZeroProbabilityError("collapse: zero-probability branch");
        }
        const double rescale = 1.0 / std::sqrt(p);
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->first.get(mode) != (bit == 1)) {
                it = terms_.erase(it);
            } else {
                it->second *= rescale;
                ++it;
            }
        }
        loss_ = 0.0;
        audit();
        return p;
    }

    /// Marks the whole state as absorbed (used when a detection samples the
    /// loss branch). The register keeps no amplitude terms afterwards.
    void collapse_to_lost() {
        terms_.clear();
        loss_ = 1.0;
    }

    /// Conditions on "no absorption happened": rescales the kept terms to
    /// unit norm and clears the loss sink.
    void renormalize_kept() {
        const double p = kept_probability();
        if (p < 1e-14) throw ZeroProbabilityError("renormalize_kept: no surviving amplitude");
        const double rescale = 1.0 / std::sqrt(p);
        for (auto& [cfg, amp] : terms_) amp *= rescale;
        loss_ = 0.0;
        audit();
    }

    /// Replaces the term map wholesale, adding `lost_mass` to the loss sink.
    /// Building block for gate modules that implement linear maps term by
    /// term; the replacement must conserve total probability.
    void apply_term_map(TermMap next, double lost_mass) {
        if (lost_mass < -conservation_tolerance) {
            throw std::invalid_argument("apply_term_map: negative loss");
        }
        const double before = total_probability();
        double after = loss_ + lost_mass;
        for (const auto& [cfg, amp] : next) {
            require_in_register(cfg, "rewritten configuration");
            after += std::norm(amp);
        }
        if (std::abs(after - before) > conservation_tolerance) {
            throw std::invalid_argument("apply_term_map: probability not conserved");
        }
        terms_ = std::move(next);
        loss_ += lost_mass;
        prune();
        audit();
    }

    /// Installed hook runs after every mutating operation on this thread;
    /// used by conservation audits in tests.
    static void set_audit_hook(AuditHook h) { audit_hook() = h; }

  private:
    static AuditHook& audit_hook() {
        thread_local AuditHook hook = nullptr;
        return hook;
    }

    void validate_modes() const {
        // ids are positional; only label sanity to check here
        if (modes_.size() > OccupationConfig::capacity) {
            throw std::invalid_argument("register capacity exceeded");
        }
    }

    void require_mode(ModeId m) const {
        if (m >= modes_.size()) throw std::invalid_argument("unknown mode id");
    }

    void require_in_register(const OccupationConfig& c, const char* what) const {
        for (std::size_t i = modes_.size(); i < OccupationConfig::capacity; ++i) {
            if (c.get(i)) {
                throw std::invalid_argument(std::string(what) + ": occupancy outside register");
            }
        }
    }

    static void require_unitary(const Matrix2& u) {
        // U^dagger U == I within 1e-12, entrywise
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                Complex e = std::conj(u[0][r]) * u[0][c] + std::conj(u[1][r]) * u[1][c];
                if (r == c) e -= 1.0;
                if (std::abs(e) > 1e-12) {
                    throw std::invalid_argument("mixer: matrix is not unitary");
                }
            }
        }
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < amplitude_prune_threshold) {
                it = terms_.erase(it);
            } else {
                ++it;
            }
        }
    }

    void audit() const {
#ifndef NDEBUG
        // cheap at the term counts this library sees
        if (std::abs(total_probability() - 1.0) > conservation_tolerance) {
            throw std::logic_error("probability conservation violated");
        }
#endif
        if (audit_hook()) audit_hook()(*this);
    }

    std::vector<ModeDescriptor> modes_;
    TermMap terms_;
    double loss_ = 0.0;
};

/// True when every term has exactly one of the qubit's rails occupied.
inline bool is_dual_rail_valid(const QuantumState& s, DualRailQubit q) {
    for (const auto& [cfg, amp] : s.terms()) {
        if (cfg.get(q.mode_a) == cfg.get(q.mode_b)) return false;
    }
    return true;
}

/// Logical bit of `q` in one term: 1 if the particle is on rail a.
inline int qubit_bit(const OccupationConfig& cfg, DualRailQubit q) {
    const bool a = cfg.get(q.mode_a), b = cfg.get(q.mode_b);
    if (a == b) throw std::invalid_argument("term is not dual-rail valid");
    return a ? 1 : 0;
}

}  // namespace ifm

#endif  // IFMSIM_FOCK_STATE_HPP
