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

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ifmsim/scenario.hpp"

using namespace ifm;
using Catch::Approx;

namespace {

const OutcomeRow* find_row(const ScenarioReport& rep, const std::string& label) {
    for (const OutcomeRow& r : rep.outcomes) {
        if (r.label == label) return &r;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("state spec parsing") {
    SECTION("basis bit strings") {
        auto amps = detail::parse_state_spec("10", 2);
        REQUIRE(amps[2] == Complex{1.0});
    }
    SECTION("named bell states") {
        auto amps = detail::parse_state_spec("psi-", 2);
        REQUIRE(amps[1].real() == Approx(1.0 / std::sqrt(2.0)));
        REQUIRE(amps[2].real() == Approx(-1.0 / std::sqrt(2.0)));
    }
    SECTION("amplitude lists, including complex tokens") {
        auto amps = detail::parse_state_spec("0.6, 0+0.8i, 0, 0", 2);
        REQUIRE(amps[0].real() == Approx(0.6));
        REQUIRE(amps[1].imag() == Approx(0.8));
    }
    SECTION("bare imaginary tokens") {
        auto amps = detail::parse_state_spec("0.5,0.5,0.5i,-0.5i", 2);
        REQUIRE(amps[2] == Complex{0.0, 0.5});
        REQUIRE(amps[3] == Complex{0.0, -0.5});
    }
    SECTION("rejects malformed and unnormalized input") {
        REQUIRE_THROWS_AS(detail::parse_state_spec("2", 2), ConfigError);
        REQUIRE_THROWS_AS(detail::parse_state_spec("0.5,0.5,0,0", 2), ConfigError);
        REQUIRE_THROWS_AS(detail::parse_state_spec("1,0,0", 2), ConfigError);
        REQUIRE_THROWS_AS(detail::parse_state_spec("abc", 2), ConfigError);
    }
}

TEST_CASE("config validation") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::bell_gen;
    SECTION("finite mode requires stages") {
        cfg.mode = RunMode::finite;
        cfg.stages = 0;
        REQUIRE_THROWS_AS(validate(cfg), ConfigError);
    }
    SECTION("ideal mode forbids stages") {
        cfg.mode = RunMode::ideal;
        cfg.stages = 4;
        REQUIRE_THROWS_AS(validate(cfg), ConfigError);
    }
    SECTION("shots must be positive") {
        cfg.shots = 0;
        REQUIRE_THROWS_AS(validate(cfg), ConfigError);
    }
}

TEST_CASE("bell_measure scenario on phi+") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::bell_measure;
    cfg.input = "phi+";
    cfg.shots = 200;
    cfg.seed = 42;
    const ScenarioReport rep = run_scenario(cfg);
    const OutcomeRow* row = find_row(rep, "(0,0)");
    REQUIRE(row != nullptr);
    REQUIRE(row->count == 200);  // frequency 1.0
    REQUIRE(row->probability.has_value());
    REQUIRE(*row->probability == Approx(1.0).margin(1e-12));
    REQUIRE(rep.outcomes.size() == 1);
}

TEST_CASE("a single-stage interferometer absorbs every shot") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::ifm_gate;
    cfg.mode = RunMode::finite;
    cfg.stages = 1;
    cfg.input = "present";
    cfg.shots = 20;
    cfg.seed = 2;
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(rep.outcomes.size() == 1);
    REQUIRE(rep.outcomes[0].label == "absorbed");
    REQUIRE(rep.outcomes[0].count == 20);
    REQUIRE(*rep.p_success == Approx(0.0).margin(1e-12));
}

TEST_CASE("ifm_gate scenario reproduces the survival law") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::ifm_gate;
    cfg.mode = RunMode::finite;
    cfg.stages = 2;
    cfg.input = "present";
    cfg.shots = 50;
    cfg.seed = 1;
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(rep.p_success.has_value());
    REQUIRE(*rep.p_success == Approx(0.25).margin(1e-10));
    const OutcomeRow* absorbed = find_row(rep, "absorbed");
    REQUIRE(absorbed != nullptr);
    REQUIRE(*absorbed->probability == Approx(0.75).margin(1e-10));
}

TEST_CASE("gc_cnot scenario maps |11> to a point mass on 10") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::gc_cnot;
    cfg.input = "11";
    cfg.shots = 64;
    cfg.seed = 9;
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(rep.outcomes.size() == 1);
    REQUIRE(rep.outcomes[0].label == "10");
    REQUIRE(rep.outcomes[0].count == 64);
    REQUIRE(rep.fidelity_vs_oracle.has_value());
    REQUIRE(*rep.fidelity_vs_oracle >= 1.0 - 1e-10);
}

TEST_CASE("bell_gen scenario reports exact probabilities and fidelity") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::bell_gen;
    cfg.shots = 500;
    cfg.seed = 3;
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(*rep.fidelity_vs_oracle == Approx(1.0).margin(1e-12));
    REQUIRE(*find_row(rep, "00")->probability == Approx(0.5).margin(1e-12));
    REQUIRE(*find_row(rep, "11")->probability == Approx(0.5).margin(1e-12));
    REQUIRE(find_row(rep, "01") == nullptr);
}

TEST_CASE("swap scenario transfers the state") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::swap;
    cfg.input = "1";
    cfg.shots = 16;
    cfg.seed = 4;
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(rep.outcomes.size() == 1);
    REQUIRE(rep.outcomes[0].label == "01");  // electron |0>, positron |1>
    REQUIRE(*rep.fidelity_vs_oracle >= 1.0 - 1e-10);
}

TEST_CASE("stage sweep") {
    SECTION("rows match the closed form") {
        const auto rows = sweep_n({1, 2, 10});
        REQUIRE(rows[0].p_success_simulated == Approx(0.0).margin(1e-12));
        REQUIRE(rows[1].p_success_simulated == Approx(0.25).margin(1e-12));
        REQUIRE(rows[2].p_success_simulated == Approx(0.780546069781141).margin(1e-12));
        for (const SweepRow& r : rows) REQUIRE(r.abs_error < 1e-10);
    }
    SECTION("loss accounts for the rest") {
        for (const SweepRow& r : sweep_n({2, 5})) {
            REQUIRE(r.p_success_simulated + r.p_loss == Approx(1.0).margin(1e-12));
        }
    }
    SECTION("empty stage lists and bad counts are rejected") {
        REQUIRE_THROWS_AS(sweep_n({}), ConfigError);
        REQUIRE_THROWS_AS(sweep_n({0}), ConfigError);
    }
    SECTION("csv columns are the documented six") {
        const std::string csv = sweep_to_csv(sweep_n({1, 2}));
        REQUIRE(csv.rfind("N,theta,p_success_simulated,p_success_formula,abs_error,p_loss\n", 0) ==
                0);
    }
}

TEST_CASE("csv report round-trips") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::bell_measure;
    cfg.input = "00";
    cfg.shots = 300;
    cfg.seed = 77;
    const ScenarioReport rep = run_scenario(cfg);
    const std::string csv = rep.to_csv();

    // parse the data rows back and recompute the frequency column
    std::istringstream in(csv);
    std::string line;
    bool header_seen = false;
    long total = 0;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            REQUIRE(line == "outcome,count,frequency,probability");
            header_seen = true;
            continue;
        }
        const auto q2 = line.find('"', 1);
        const std::string label = line.substr(1, q2 - 1);
        std::istringstream fields(line.substr(q2 + 2));
        std::string count_s, freq_s;
        std::getline(fields, count_s, ',');
        std::getline(fields, freq_s, ',');
        const long count = std::stol(count_s);
        total += count;
        REQUIRE(freq_s == fmt12(static_cast<double>(count) / static_cast<double>(cfg.shots)));
        ++rows;
        (void)label;
    }
    REQUIRE(rows == static_cast<int>(rep.outcomes.size()));
    REQUIRE(total == cfg.shots);
}

TEST_CASE("json report round-trips") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::bell_gen;
    cfg.shots = 100;
    cfg.seed = 5;
    const ScenarioReport rep = run_scenario(cfg);
    const nlohmann::json j = nlohmann::json::parse(rep.render(OutputFormat::json));
    long total = 0;
    for (const auto& row : j.at("outcomes")) {
        const long count = row.at("count").get<long>();
        total += count;
        REQUIRE(row.at("frequency").get<double>() ==
                static_cast<double>(count) / static_cast<double>(cfg.shots));
    }
    REQUIRE(total == cfg.shots);
    REQUIRE(j.at("circuit") == "bell_gen");
}

TEST_CASE("scenario determinism") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::bell_measure;
    cfg.input = "00";
    cfg.shots = 1000;
    cfg.seed = 123;
    const std::string a = run_scenario(cfg).to_csv();
    const std::string b = run_scenario(cfg).to_csv();
    REQUIRE(a == b);
    cfg.seed = 124;
    const std::string c = run_scenario(cfg).to_csv();
    REQUIRE(a != c);
}

TEST_CASE("verify_all") {
    SECTION("fresh build passes every check") {
        std::ostringstream os;
        REQUIRE(verify_all(7, os) == 0);
        REQUIRE(os.str().find("[FAIL]") == std::string::npos);
    }
    SECTION("a corrupted correction table is reported") {
        CorrectionTable bad = standard_correction_table();
        bad.entries[3] = {Pauli::XZ, Pauli::XZ};
        std::ostringstream os;
        REQUIRE(verify_all(7, os, &bad) > 0);
        REQUIRE(os.str().find("[FAIL]") != std::string::npos);
    }
    SECTION("output is deterministic for a fixed seed") {
        std::ostringstream a, b;
        verify_all(11, a);
        verify_all(11, b);
        REQUIRE(a.str() == b.str());
    }
}

TEST_CASE("finite-mode bell_gen reports its loss") {
    ScenarioConfig cfg;
    cfg.circuit = CircuitKind::bell_gen;
    cfg.mode = RunMode::finite;
    cfg.stages = 10;
    cfg.shots = 50;
    cfg.seed = 6;
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(rep.kept_probability == Approx(0.89027303489057).margin(1e-12));
    REQUIRE(rep.loss_probability == Approx(1.0 - 0.89027303489057).margin(1e-12));
    const OutcomeRow* inc = find_row(rep, "inconclusive");
    REQUIRE(inc != nullptr);
    REQUIRE(*inc->probability == Approx(rep.loss_probability).margin(1e-12));
}
