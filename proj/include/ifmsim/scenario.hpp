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

#ifndef IFMSIM_SCENARIO_HPP
#define IFMSIM_SCENARIO_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "ifmsim/circuits.hpp"

namespace ifm {

enum class CircuitKind { bell_gen, bell_measure, chi_gen, gc_cnot, swap, ee_cnot, ifm_gate };
enum class RunMode { ideal, finite };
enum class OutputFormat { csv, json };

/// Raised for malformed scenario configs; the CLI maps it to exit code 1.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline CircuitKind parse_circuit_kind(const std::string& s) {
    if (s == "bell_gen") return CircuitKind::bell_gen;
    if (s == "bell_measure") return CircuitKind::bell_measure;
    if (s == "chi_gen") return CircuitKind::chi_gen;
    if (s == "gc_cnot") return CircuitKind::gc_cnot;
    if (s == "swap") return CircuitKind::swap;
    if (s == "ee_cnot") return CircuitKind::ee_cnot;
    if (s == "ifm_gate") return CircuitKind::ifm_gate;
    throw ConfigError("unknown circuit: " + s);
}

inline const char* to_string(CircuitKind c) {
    switch (c) {
        case CircuitKind::bell_gen: return "bell_gen";
        case CircuitKind::bell_measure: return "bell_measure";
        case CircuitKind::chi_gen: return "chi_gen";
        case CircuitKind::gc_cnot: return "gc_cnot";
        case CircuitKind::swap: return "swap";
        case CircuitKind::ee_cnot: return "ee_cnot";
        case CircuitKind::ifm_gate: return "ifm_gate";
    }
    return "?";
}

struct ScenarioConfig {
    CircuitKind circuit = CircuitKind::bell_gen;
    RunMode mode = RunMode::ideal;
    int stages = 0;  // meaningful only in finite mode
    std::string input;
    long shots = 1;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::csv;
    std::string out_path;  // empty or "-" writes to stdout
};

/// Numbers in reports carry 12 significant digits: enough that diffs are
/// stable across runs without pretending floats are exact.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct OutcomeRow {
    std::string label;
    long count = 0;
    std::optional<double> probability;  // analytic value, when available
};

struct ScenarioReport {
    std::string circuit;
    std::string mode;
    std::optional<int> stages;
    long shots = 0;
    std::uint64_t seed = 0;
    std::vector<OutcomeRow> outcomes;  // sorted by label
    double kept_probability = 1.0;
    double loss_probability = 0.0;
    std::optional<double> fidelity_vs_oracle;
    std::optional<double> p_success;
    std::optional<std::string> note;

    std::string to_csv() const {
        std::ostringstream os;
        os << "# ifm-sim report\n";
        os << "# circuit=" << circuit << "\n";
        os << "# mode=" << mode << "\n";
        os << "# stages=" << (stages ? std::to_string(*stages) : "") << "\n";
        os << "# shots=" << shots << "\n";
        os << "# seed=" << seed << "\n";
        os << "# kept_probability=" << fmt12(kept_probability) << "\n";
        os << "# loss_probability=" << fmt12(loss_probability) << "\n";
        if (fidelity_vs_oracle) os << "# fidelity_vs_oracle=" << fmt12(*fidelity_vs_oracle) << "\n";
        if (p_success) os << "# p_success=" << fmt12(*p_success) << "\n";
        if (note) os << "# note=" << *note << "\n";
        os << "outcome,count,frequency,probability\n";
        for (const OutcomeRow& r : outcomes) {
            os << '"' << r.label << "\"," << r.count << ','
               << fmt12(static_cast<double>(r.count) / static_cast<double>(shots)) << ','
               << (r.probability ? fmt12(*r.probability) : "") << "\n";
        }
        return os.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["circuit"] = circuit;
        j["mode"] = mode;
        if (stages) {
            j["stages"] = *stages;
        } else {
            j["stages"] = nullptr;
        }
        j["shots"] = shots;
        j["seed"] = seed;
        j["kept_probability"] = kept_probability;
        j["loss_probability"] = loss_probability;
        j["fidelity_vs_oracle"] =
            fidelity_vs_oracle ? nlohmann::json(*fidelity_vs_oracle) : nlohmann::json(nullptr);
        j["p_success"] = p_success ? nlohmann::json(*p_success) : nlohmann::json(nullptr);
        j["note"] = note ? nlohmann::json(*note) : nlohmann::json(nullptr);
        auto rows = nlohmann::json::array();
        for (const OutcomeRow& r : outcomes) {
            nlohmann::json row;
            row["label"] = r.label;
            row["count"] = r.count;
            row["frequency"] = static_cast<double>(r.count) / static_cast<double>(shots);
            row["probability"] = r.probability ? nlohmann::json(*r.probability) : nlohmann::json(nullptr);
            rows.push_back(row);
        }
        j["outcomes"] = rows;
        return j;
    }

    std::string render(OutputFormat f) const {
        return f == OutputFormat::csv ? to_csv() : to_json().dump(2) + "\n";
    }
};

namespace detail {

inline Complex parse_complex(std::string token) {
    auto strip = [](std::string& t) {
        t.erase(0, t.find_first_not_of(" \t"));
        const auto e = t.find_last_not_of(" \t");
        t.erase(e == std::string::npos ? 0 : e + 1);
    };
    strip(token);
    if (token.empty()) throw ConfigError("empty amplitude token");
    // forms: "1.5", "0.7i", "0.5+0.5i", "-i", "1e-3-2i"
    double re = 0.0, im = 0.0;
    const char* p = token.c_str();
    // reads one signed number with optional trailing i: {0,_} fail,
    // {1, v} real part, {2, v} imaginary part
    auto read_term = [&p]() -> std::pair<int, double> {
        if (*p == 'i' || *p == 'j') {
            ++p;
            return {2, 1.0};
        }
        if ((*p == '+' || *p == '-') && (p[1] == 'i' || p[1] == 'j')) {
            const double v = (*p == '-') ? -1.0 : 1.0;
            p += 2;
            return {2, v};
        }
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) return {0, 0.0};
        p = end;
        if (*p == 'i' || *p == 'j') {
            ++p;
            return {2, v};
        }
        return {1, v};
    };
    const auto [kind1, v1] = read_term();
    if (kind1 == 0) throw ConfigError("bad amplitude token: " + token);
    (kind1 == 2 ? im : re) = v1;
    if (*p != '\0') {
        const auto [kind2, v2] = read_term();
        if (kind2 != 2 || kind1 == 2 || *p != '\0') {
            throw ConfigError("bad amplitude token: " + token);
        }
        im = v2;
    }
    return {re, im};
}

/// Parses a state spec: a basis bitstring, a named state, or a
/// comma-separated amplitude list of length 2^n.
inline std::vector<Complex> parse_state_spec(const std::string& input, int num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<Complex> amps(dim, Complex{0.0});
    const double r = 1.0 / std::sqrt(2.0);
    if (num_qubits == 2) {
        if (input == "phi+") { amps[0] = r; amps[3] = r; return amps; }
        if (input == "phi-") { amps[0] = r; amps[3] = -r; return amps; }
        if (input == "psi+") { amps[1] = r; amps[2] = r; return amps; }
        if (input == "psi-") { amps[1] = r; amps[2] = -r; return amps; }
    }
    if (num_qubits == 1) {
        if (input == "+") { amps[0] = r; amps[1] = r; return amps; }
        if (input == "-") { amps[0] = r; amps[1] = -r; return amps; }
    }
    if (input.find(',') == std::string::npos) {
        if (static_cast<int>(input.size()) != num_qubits ||
            input.find_first_not_of("01") != std::string::npos) {
            throw ConfigError("input must be a " + std::to_string(num_qubits) +
                              "-bit basis string, a named state, or an amplitude list");
        }
        std::size_t index = 0;
        for (char c : input) index = (index << 1) | (c == '1' ? 1u : 0u);
        amps[index] = 1.0;
        return amps;
    }
    std::vector<Complex> parsed;
    std::stringstream ss(input);
    std::string token;
    while (std::getline(ss, token, ',')) parsed.push_back(parse_complex(token));
    if (parsed.size() != dim) {
        throw ConfigError("amplitude list must have " + std::to_string(dim) + " entries");
    }
    double norm2 = 0.0;
    for (const Complex& a : parsed) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-9) {
        throw ConfigError("amplitude list is not normalized (within 1e-9)");
    }
    return parsed;
}

struct PreparedRegister {
    QuantumState state;
    std::vector<DualRailQubit> qubits;
};

/// Lays out dual-rail qubits of the given species and loads an arbitrary
/// logical superposition onto them.
inline PreparedRegister prepare_register(const std::vector<Species>& species,
                                         const std::vector<Complex>& logical_amps) {
    PreparedRegister out;
    std::vector<ModeDescriptor> modes;
    std::vector<DualRailQubit> qubits;
    for (std::size_t k = 0; k < species.size(); ++k) {
        const std::string name = "q" + std::to_string(k + 1);
        qubits.push_back({static_cast<ModeId>(2 * k), static_cast<ModeId>(2 * k + 1)});
        modes.push_back({species[k], name + ".a"});
        modes.push_back({species[k], name + ".b"});
    }
    std::vector<std::pair<OccupationConfig, Complex>> terms;
    for (std::size_t index = 0; index < logical_amps.size(); ++index) {
        if (std::abs(logical_amps[index]) == 0.0) continue;
        OccupationConfig cfg;
        for (std::size_t k = 0; k < species.size(); ++k) {
            const bool one = (index >> (species.size() - 1 - k)) & 1;
            cfg.set(one ? qubits[k].mode_a : qubits[k].mode_b, true);
        }
        terms.emplace_back(cfg, logical_amps[index]);
    }
    out.state = QuantumState::from_terms(std::move(modes), terms);
    out.qubits = std::move(qubits);
    return out;
}

/// Reads the logical bits of `qubits` out of a shot by sequential detection.
inline std::string detect_logical_bits(QuantumState& s, const std::vector<DualRailQubit>& qubits,
                                       std::mt19937_64& rng, ShotRecord* record) {
    std::string bits;
    for (DualRailQubit q : qubits) {
        const DetectResult r = detect(s, q.mode_a, rng);
        if (record) record->record(q.mode_a, r);
        if (r.is_lost()) return "inconclusive";
        bits.push_back(r.clicked() ? '1' : '0');
    }
    return bits;
}

/// Runs `per_shot(k)` for k in [0, shots), splitting across threads for
/// large shot counts. Each shot draws from its own counter-derived stream,
/// so the result is independent of the execution order. A throwing shot
/// does not take the process down; the first exception is rethrown here.
template <typename F>
void for_each_shot(long shots, F&& per_shot) {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned workers = std::min<unsigned>(hw ? hw : 1, 8);
    if (shots < 4096 || workers <= 1) {
        for (long k = 0; k < shots; ++k) per_shot(k);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const long chunk = (shots + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const long lo = w * chunk, hi = std::min<long>(shots, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &per_shot, &first_error, &error_mutex] {
            try {
                for (long k = lo; k < hi; ++k) per_shot(k);
            } catch (...) {
                std::lock_guard<std::mutex> g(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline void sort_outcomes(std::vector<OutcomeRow>& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const OutcomeRow& a, const OutcomeRow& b) { return a.label < b.label; });
}

}  // namespace detail

inline void validate(const ScenarioConfig& c) {
    if (c.mode == RunMode::finite && c.stages < 1) {
        throw ConfigError("finite mode requires --stages >= 1");
    }
    if (c.mode == RunMode::ideal && c.stages != 0) {
        throw ConfigError("--stages is only meaningful in finite mode");
    }
    if (c.shots < 1) throw ConfigError("--shots must be >= 1");
}

/// Runs one scenario and assembles its report. Sampled outcome labels are
/// logical bit strings (or "(x,z)" pairs for bell_measure); exact Born
/// probabilities are attached where the circuit admits them.
inline ScenarioReport run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    const IfmMode mode =
        cfg.mode == RunMode::ideal ? IfmMode::ideal() : IfmMode::finite(cfg.stages);
    const SplitRng root(cfg.seed);

    ScenarioReport rep;
    rep.circuit = to_string(cfg.circuit);
    rep.mode = cfg.mode == RunMode::ideal ? "ideal" : "finite";
    rep.stages = mode.stages;
    rep.shots = cfg.shots;
    rep.seed = cfg.seed;

    std::map<std::string, long> counts;
    std::vector<std::string> labels(static_cast<std::size_t>(cfg.shots));
    double min_fidelity = 2.0;  // sentinel; shrinks to the worst shot
    std::mutex fidelity_mutex;

    auto account = [&] {
        for (const std::string& l : labels) ++counts[l];
        for (auto& [label, n] : counts) rep.outcomes.push_back({label, n, std::nullopt});
        detail::sort_outcomes(rep.outcomes);
    };

    switch (cfg.circuit) {
        case CircuitKind::bell_gen:
        case CircuitKind::chi_gen: {
            const bool is_bell = cfg.circuit == CircuitKind::bell_gen;
            detail::PreparedRegister base;
            if (is_bell) {
                const std::string input = cfg.input.empty() ? "00" : cfg.input;
                base = detail::prepare_register({Species::positron, Species::electron},
                                                detail::parse_state_spec(input, 2));
                bell_generate(base.state, base.qubits[0], base.qubits[1], mode);
            } else {
                if (!cfg.input.empty()) throw ConfigError("chi_gen takes no --input");
                base.state = QuantumState();
                auto q = chi_generate(base.state, mode);
                base.qubits.assign(q.begin(), q.end());
            }
            rep.loss_probability = base.state.loss_probability();
            rep.kept_probability = base.state.kept_probability();

            // fidelity of the surviving component against the reference state
            QuantumState kept = base.state;
            kept.renormalize_kept();
            DenseState ref = [&] {
                if (is_bell) {
                    const std::string input = cfg.input.empty() ? "00" : cfg.input;
                    DenseState d = DenseState::from_amplitudes(detail::parse_state_spec(input, 2));
                    d.apply_h(0);
                    d.apply_cnot(0, 1);
                    return d;
                }
                std::vector<Complex> chi(16, Complex{0.0});
                chi[0b0000] = chi[0b1100] = chi[0b0111] = chi[0b1011] = 0.5;
                return DenseState::from_amplitudes(std::move(chi));
            }();
            rep.fidelity_vs_oracle = fidelity(ref, embed(kept, std::span<const DualRailQubit>(
                                                                   base.qubits.data(),
                                                                   base.qubits.size())));

            // exact Born probabilities of the logical configurations
            std::map<std::string, double> probs;
            for (const auto& [c, amp] : base.state.terms()) {
                std::string bits;
                for (DualRailQubit q : base.qubits) bits.push_back('0' + qubit_bit(c, q));
                probs[bits] += std::norm(amp);
            }
            if (rep.loss_probability > 0.0) probs["inconclusive"] = rep.loss_probability;

            detail::for_each_shot(cfg.shots, [&](long k) {
                QuantumState s = base.state;
                auto rng = root.substream(static_cast<std::uint64_t>(k));
                labels[k] = detail::detect_logical_bits(s, base.qubits, rng, nullptr);
            });
            account();
            for (OutcomeRow& r : rep.outcomes) {
                if (auto it = probs.find(r.label); it != probs.end()) r.probability = it->second;
            }
            break;
        }

        case CircuitKind::bell_measure: {
            const std::string input = cfg.input.empty() ? "00" : cfg.input;
            detail::PreparedRegister base = detail::prepare_register(
                {Species::positron, Species::electron}, detail::parse_state_spec(input, 2));

            // exact branch probabilities via forced branches on copies
            std::map<std::string, double> probs;
            double conclusive = 0.0;
            for (int x = 0; x < 2; ++x) {
                for (int z = 0; z < 2; ++z) {
                    QuantumState s = base.state;
                    try {
                        BellOutcome o =
                            bell_measure_postselect(s, base.qubits[0], base.qubits[1], x, z, mode);
                        const char lbl[6] = {'(', char('0' + x), ',', char('0' + z), ')', 0};
                        probs[lbl] = o.probability;
                        conclusive += o.probability;
                    } catch (const ZeroProbabilityError&) {
                        // branch genuinely empty; probability 0
                    }
                }
            }
            rep.kept_probability = conclusive;
            rep.loss_probability = std::max(0.0, 1.0 - conclusive);
            if (rep.loss_probability > 1e-12) probs["inconclusive"] = rep.loss_probability;

            detail::for_each_shot(cfg.shots, [&](long k) {
                QuantumState s = base.state;
                auto rng = root.substream(static_cast<std::uint64_t>(k));
                BellOutcome o = bell_measure(s, base.qubits[0], base.qubits[1], rng, mode);
                labels[k] = o.inconclusive
                                ? "inconclusive"
                                : "(" + std::to_string(o.x_bit) + "," + std::to_string(o.z_bit) + ")";
            });
            account();
            for (OutcomeRow& r : rep.outcomes) {
                if (auto it = probs.find(r.label); it != probs.end()) r.probability = it->second;
            }
            break;
        }

        case CircuitKind::gc_cnot:
        case CircuitKind::ee_cnot: {
            const bool ee = cfg.circuit == CircuitKind::ee_cnot;
            const std::string input = cfg.input.empty() ? "00" : cfg.input;
            const std::vector<Complex> amps = detail::parse_state_spec(input, 2);
            DenseState ref = DenseState::from_amplitudes(amps);
            ref.apply_cnot(0, 1);

            long lost_shots = 0;
            std::mutex lost_mutex;
            detail::for_each_shot(cfg.shots, [&](long k) {
                detail::PreparedRegister r = detail::prepare_register(
                    ee ? std::vector<Species>{Species::electron, Species::electron}
                       : std::vector<Species>{Species::positron, Species::electron},
                    amps);
                auto rng = root.substream(static_cast<std::uint64_t>(k));
                DualRailQubit c_out{}, t_out{};
                bool inconclusive = false;
                if (ee) {
                    EeCnotResult res = cnot_between_electrons(r.state, r.qubits[0], r.qubits[1], rng, mode);
                    inconclusive = res.inconclusive;
                    c_out = res.control_out;
                    t_out = res.target_out;
                } else {
                    GcCnotResult res = gc_cnot(r.state, r.qubits[0], r.qubits[1], rng, mode);
                    inconclusive = res.inconclusive;
                    c_out = res.control_out;
                    t_out = res.target_out;
                }
                if (inconclusive) {
                    labels[k] = "inconclusive";
                    std::lock_guard<std::mutex> g(lost_mutex);
                    ++lost_shots;
                    return;
                }
                QuantumState kept = r.state;
                kept.renormalize_kept();
                const double f = fidelity(ref, embed(kept, {c_out, t_out}));
                {
                    std::lock_guard<std::mutex> g(fidelity_mutex);
                    min_fidelity = std::min(min_fidelity, f);
                }
                labels[k] = detail::detect_logical_bits(r.state, {c_out, t_out}, rng, nullptr);
            });
            account();
            rep.kept_probability =
                static_cast<double>(cfg.shots - lost_shots) / static_cast<double>(cfg.shots);
            rep.loss_probability = 1.0 - rep.kept_probability;
            if (min_fidelity <= 1.5) rep.fidelity_vs_oracle = min_fidelity;
            break;
        }

        case CircuitKind::swap: {
            const std::string input = cfg.input.empty() ? "0" : cfg.input;
            const std::vector<Complex> amps = detail::parse_state_spec(input, 1);
            // reference: electron left in |0>, positron carrying the input
            DenseState ref = DenseState::from_amplitudes({amps[0], amps[1], 0.0, 0.0});

            long lost_shots = 0;
            std::mutex lost_mutex;
            detail::for_each_shot(cfg.shots, [&](long k) {
                detail::PreparedRegister r =
                    detail::prepare_register({Species::electron}, amps);
                DualRailQubit anc = add_qubit(r.state, Species::positron, "anc");
                auto rng = root.substream(static_cast<std::uint64_t>(k));
                SwapResult res = swap_via_cnot(r.state, r.qubits[0], anc, rng, mode);
                if (res.inconclusive) {
                    labels[k] = "inconclusive";
                    std::lock_guard<std::mutex> g(lost_mutex);
                    ++lost_shots;
                    return;
                }
                QuantumState kept = r.state;
                kept.renormalize_kept();
                const double f = fidelity(ref, embed(kept, {res.electron_out, res.positron_out}));
                {
                    std::lock_guard<std::mutex> g(fidelity_mutex);
                    min_fidelity = std::min(min_fidelity, f);
                }
                labels[k] = detail::detect_logical_bits(
                    r.state, {res.electron_out, res.positron_out}, rng, nullptr);
            });
            account();
            rep.kept_probability =
                static_cast<double>(cfg.shots - lost_shots) / static_cast<double>(cfg.shots);
            rep.loss_probability = 1.0 - rep.kept_probability;
            if (min_fidelity <= 1.5) rep.fidelity_vs_oracle = min_fidelity;
            break;
        }

        case CircuitKind::ifm_gate: {
            const std::string input = cfg.input.empty() ? "present" : cfg.input;
            if (input != "present" && input != "absent") {
                throw ConfigError("ifm_gate input must be 'present' or 'absent'");
            }
            const bool present = input == "present";
            // photon thrown into the lower port b; absorber on path x
            QuantumState base(
                {{Species::object, "x"}, {Species::photon, "a"}, {Species::photon, "b"}},
                make_config(present ? "101" : "001"));
            apply_ifm(base, IfmGateSpec{0, 1, 2, mode.stages});

            rep.loss_probability = base.loss_probability();
            rep.kept_probability = base.kept_probability();
            std::map<std::string, double> probs;
            for (const auto& [c, amp] : base.terms()) {
                probs[c.get(1) ? "a" : "b"] += std::norm(amp);
            }
            if (rep.loss_probability > 0.0) probs["absorbed"] = rep.loss_probability;
            rep.p_success = present ? probs.count("b") ? probs["b"] : 0.0
                                    : probs.count("a") ? probs["a"] : 0.0;

            detail::for_each_shot(cfg.shots, [&](long k) {
                if (rep.loss_probability >= 1.0 - 1e-14) {
                    // e.g. a single stage with the object present: the probe
                    // never survives, so there is nothing left to detect
                    labels[k] = "absorbed";
                    return;
                }
                QuantumState s = base;
                auto rng = root.substream(static_cast<std::uint64_t>(k));
                const DetectResult on_a = detect(s, 1, rng);
                if (on_a.is_lost()) {
                    labels[k] = "absorbed";
                } else {
                    labels[k] = on_a.clicked() ? "a" : "b";
                }
            });
            account();
            for (OutcomeRow& r : rep.outcomes) {
                if (auto it = probs.find(r.label); it != probs.end()) r.probability = it->second;
            }
            break;
        }
    }
    return rep;
}

/// One row of the stage-count sweep against the closed-form survival law.
struct SweepRow {
    int stages;
    double theta;
    double p_success_simulated;
    double p_success_formula;
    double abs_error;
    double p_loss;
};

/// Simulates the bare interferometer for each N and compares against
/// P(N) = cos^{2N}(pi/2N). Rows are independent and ordered as given.
inline std::vector<SweepRow> sweep_n(const std::vector<int>& n_values, bool object_present = true) {
    if (n_values.empty()) throw ConfigError("sweep: empty stage list");
    std::vector<SweepRow> rows(n_values.size());
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const int n = n_values[i];
        if (n < 1) throw ConfigError("sweep: stages must be >= 1");
        QuantumState s({{Species::object, "x"}, {Species::photon, "a"}, {Species::photon, "b"}},
                       make_config(object_present ? "101" : "001"));
        finite_ifm(s, 0, 1, 2, n);
        OccupationConfig success;
        success.set(0, object_present);
        success.set(object_present ? 2 : 1, true);  // b with the object, a without
        const double p_sim = std::norm(s.amplitude(success));
        rows[i] = {n,
                   std::numbers::pi / (2.0 * n),
                   p_sim,
                   ifm_survival_probability(n),
                   std::abs(p_sim - ifm_survival_probability(n)),
                   s.loss_probability()};
    }
    return rows;
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "N,theta,p_success_simulated,p_success_formula,abs_error,p_loss\n";
    for (const SweepRow& r : rows) {
        os << r.stages << ',' << fmt12(r.theta) << ',' << fmt12(r.p_success_simulated) << ','
           << fmt12(r.p_success_formula) << ',' << fmt12(r.abs_error) << ',' << fmt12(r.p_loss)
           << "\n";
    }
    return os.str();
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        arr.push_back({{"N", r.stages},
                       {"theta", r.theta},
                       {"p_success_simulated", r.p_success_simulated},
                       {"p_success_formula", r.p_success_formula},
                       {"abs_error", r.abs_error},
                       {"p_loss", r.p_loss}});
    }
    return arr;
}

/// Full invariant suite; prints one pass/fail line per check and returns the
/// number of failures. `table_override` lets tests feed in a corrupted
/// correction table.
inline int verify_all(std::uint64_t seed, std::ostream& os,
                      const CorrectionTable* table_override = nullptr) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        os << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };
    const CorrectionTable& table = table_override ? *table_override : standard_correction_table();

    // ideal gate truth table
    {
        bool ok = true;
        auto run = [](const std::string& bits) {
            QuantumState s({{Species::positron, "x"}, {Species::electron, "a"},
                            {Species::electron, "b"}},
                           make_config(bits));
            ideal_ifm(s, 0, 1, 2);
            return s;
        };
        ok &= std::abs(run("001").amplitude(make_config("010")) - Complex{1.0}) < 1e-15;
        ok &= std::abs(run("101").amplitude(make_config("101")) - Complex{1.0}) < 1e-15;
        ok &= std::abs(run("010").amplitude(make_config("001")) - Complex{-1.0}) < 1e-15;
        ok &= std::abs(run("100").amplitude(make_config("100")) - Complex{1.0}) < 1e-15;
        ok &= std::abs(run("110").loss_probability() - 1.0) < 1e-15;
        check("ideal gate truth table", ok);
    }

    // survival probability law
    {
        bool ok = true;
        for (const SweepRow& r : sweep_n({1, 2, 5, 10, 50})) ok &= r.abs_error < 1e-10;
        check("survival probability law", ok);
    }

    // Bell state amplitudes
    {
        detail::PreparedRegister r = detail::prepare_register(
            {Species::positron, Species::electron}, detail::parse_state_spec("00", 2));
        bell_generate(r.state, r.qubits[0], r.qubits[1]);
        const double rt = 1.0 / std::sqrt(2.0);
        bool ok = std::abs(r.state.amplitude(make_config("0101")) - Complex{rt}) < 1e-12 &&
                  std::abs(r.state.amplitude(make_config("1010")) - Complex{rt}) < 1e-12 &&
                  r.state.term_count() == 2;
        check("bell state amplitudes", ok);
    }

    // Bell measurement intermediate states (both table columns)
    {
        bool ok = true;
        struct Row {
            const char* input;
            int t1_path;  // mode id occupied at T1
            int t2_path;
            double t2_sign;
        };
        // paths: A=0 B=1 C=2 E=3 F=4 D=5 (F and D appended in that order);
        // inputs are logical two-qubit basis states
        const Row rows[4] = {
            {"00", 4, 4, 1.0},
            {"01", 2, 3, -1.0},
            {"10", 3, 3, 1.0},
            {"11", 5, 4, -1.0},
        };
        for (const Row& row : rows) {
            detail::PreparedRegister r = detail::prepare_register(
                {Species::positron, Species::electron},
                detail::parse_state_spec(row.input, 2));
            BellNetworkPaths p =
                bell_network_first_pass(r.state, r.qubits[0], r.qubits[1], IfmMode::ideal());
            {
                OccupationConfig want;
                want.set(row.input[0] == '1' ? p.A : p.B, true);
                want.set(static_cast<ModeId>(row.t1_path), true);
                ok &= std::abs(r.state.amplitude(want) - Complex{1.0}) < 1e-12;
                ok &= r.state.term_count() == 1;
            }
            bell_network_second_pass(r.state, p, IfmMode::ideal());
            {
                OccupationConfig want;
                want.set(row.input[0] == '1' ? p.A : p.B, true);
                want.set(static_cast<ModeId>(row.t2_path), true);
                ok &= std::abs(r.state.amplitude(want) - Complex{row.t2_sign}) < 1e-12;
                ok &= r.state.term_count() == 1;
            }
        }
        check("bell measurement intermediate states", ok);
    }

    // chi state amplitudes
    {
        QuantumState s;
        auto q = chi_generate(s);
        DenseState d = embed(s, {q[0], q[1], q[2], q[3]});
        bool ok = true;
        for (std::size_t i = 0; i < 16; ++i) {
            const bool expect = i == 0b0000 || i == 0b1100 || i == 0b0111 || i == 0b1011;
            ok &= std::abs(d.amplitude(i) - (expect ? Complex{0.5} : Complex{0.0})) < 1e-12;
        }
        check("chi state amplitudes", ok);
    }

    // correction table
    check("correction table", validate_correction_table(table));

    // oracle equivalence on seeded random states
    {
        bool ok = true;
        SplitRng root(seed);
        for (int trial = 0; trial < 10 && ok; ++trial) {
            auto rng = root.substream(static_cast<std::uint64_t>(trial));
            const std::vector<Complex> amps = random_state_amplitudes(rng, 2);
            DenseState ref = DenseState::from_amplitudes(amps);
            ref.apply_cnot(0, 1);

            detail::PreparedRegister r =
                detail::prepare_register({Species::positron, Species::electron}, amps);
            GcCnotResult res = gc_cnot(r.state, r.qubits[0], r.qubits[1], rng, IfmMode::ideal(),
                                       table_override ? *table_override
                                                      : standard_correction_table());
            ok &= !res.inconclusive &&
                  fidelity(ref, embed(r.state, {res.control_out, res.target_out})) >= 1.0 - 1e-10;

            detail::PreparedRegister r2 =
                detail::prepare_register({Species::electron, Species::electron}, amps);
            EeCnotResult res2 = cnot_between_electrons(
                r2.state, r2.qubits[0], r2.qubits[1], rng, IfmMode::ideal(),
                table_override ? *table_override : standard_correction_table());
            ok &= !res2.inconclusive &&
                  fidelity(ref, embed(r2.state, {res2.control_out, res2.target_out})) >=
                      1.0 - 1e-10;
        }
        check("oracle equivalence (seeded random states)", ok);
    }

    return failures;
}

/// Writes `text` to `path`, or stdout for "" / "-".
inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        fallback << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file: " + path);
    f << text;
}

}  // namespace ifm

#endif  // IFMSIM_SCENARIO_HPP
