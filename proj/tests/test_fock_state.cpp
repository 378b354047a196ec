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

#include <cmath>
#include <random>

#include "ifmsim/fock_state.hpp"

using namespace ifm;
using Catch::Approx;

namespace {

std::vector<ModeDescriptor> photon_modes(int n) {
    std::vector<ModeDescriptor> m;
    for (int i = 0; i < n; ++i) m.push_back({Species::photon, std::string(1, char('a' + i))});
    return m;
}

QuantumState::Matrix2 rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {{{Complex{c}, Complex{s}}, {Complex{-s}, Complex{c}}}};
}

}  // namespace

TEST_CASE("register construction") {
    SECTION("single basis initialization") {
        QuantumState s({{Species::object, "x"}, {Species::photon, "a"}, {Species::photon, "b"}},
                       make_config("001"));
        REQUIRE(s.term_count() == 1);
        REQUIRE(s.amplitude(make_config("001")) == Complex{1.0});
        REQUIRE(s.loss_probability() == 0.0);
    }
    SECTION("two-mode register") {
        QuantumState s(photon_modes(2), make_config("10"));
        REQUIRE(s.amplitude(make_config("10")) == Complex{1.0});
    }
    SECTION("occupancy outside the register is rejected") {
        REQUIRE_THROWS_AS(QuantumState(photon_modes(2), make_config("101")),
                          std::invalid_argument);
    }
    SECTION("mode ids are unique by construction") {
        QuantumState s;
        const ModeId a = s.add_mode({Species::photon, "p"});
        const ModeId b = s.add_mode({Species::photon, "p"});  // same label is fine
        REQUIRE(a != b);
    }
    SECTION("capacity is enforced") {
        QuantumState s;
        for (std::size_t i = 0; i < OccupationConfig::capacity; ++i) {
            s.add_mode({Species::photon, "m"});
        }
        REQUIRE_THROWS_AS(s.add_mode({Species::photon, "overflow"}), std::invalid_argument);
    }
}

TEST_CASE("amplitude lookup") {
    QuantumState s(photon_modes(2), make_config("01"));
    REQUIRE(s.amplitude(make_config("01")) == Complex{1.0});
    REQUIRE(s.amplitude(make_config("10")) == Complex{0.0});
    REQUIRE_THROWS_AS(s.amplitude(make_config("011")), std::invalid_argument);
}

TEST_CASE("from_terms") {
    const double r = 1.0 / std::sqrt(2.0);
    SECTION("accepts a normalized superposition") {
        auto s = QuantumState::from_terms(photon_modes(2), {{make_config("10"), Complex{r}},
                                                            {make_config("01"), Complex{-r}}});
        REQUIRE(s.kept_probability() == Approx(1.0).margin(1e-12));
        REQUIRE(s.amplitude(make_config("01")).real() == Approx(-r));
    }
    SECTION("rejects unnormalized amplitudes") {
        REQUIRE_THROWS_AS(
            QuantumState::from_terms(photon_modes(2), {{make_config("10"), Complex{0.5}}}),
            std::invalid_argument);
    }
    SECTION("rejects duplicate configurations") {
        REQUIRE_THROWS_AS(
            QuantumState::from_terms(photon_modes(2), {{make_config("10"), Complex{r}},
                                                       {make_config("10"), Complex{r}}}),
            std::invalid_argument);
    }
}

TEST_CASE("two-mode mixer") {
    SECTION("identity leaves the state alone") {
        QuantumState s(photon_modes(2), make_config("10"));
        s.apply_two_mode_mixer(0, 1, rotation(0.0));
        REQUIRE(s.amplitude(make_config("10")) == Complex{1.0});
        REQUIRE(s.term_count() == 1);
    }
    SECTION("terms outside the single-excitation subspace pass through") {
        QuantumState s(photon_modes(3), make_config("110"));
        s.apply_two_mode_mixer(0, 1, rotation(0.7));  // modes 0,1 both occupied
        REQUIRE(s.amplitude(make_config("110")) == Complex{1.0});
        s.apply_two_mode_mixer(1, 2, rotation(0.7));  // mode 1 occupied, 2 empty: mixes
        REQUIRE(s.term_count() == 2);
    }
    SECTION("rotation composition: R(t1) R(t2) = R(t1 + t2)") {
        std::mt19937_64 rng(12345);
        for (int trial = 0; trial < 20; ++trial) {
            const double t1 = 3.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.5;
            const double t2 = 3.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.5;
            QuantumState a(photon_modes(2), make_config("10"));
            a.apply_two_mode_mixer(0, 1, rotation(t1));
            a.apply_two_mode_mixer(0, 1, rotation(t2));
            QuantumState b(photon_modes(2), make_config("10"));
            b.apply_two_mode_mixer(0, 1, rotation(t1 + t2));
            for (const auto& cfg : {make_config("10"), make_config("01")}) {
                REQUIRE(std::abs(a.amplitude(cfg) - b.amplitude(cfg)) < 1e-12);
            }
        }
    }
    SECTION("kept norm is preserved") {
        QuantumState s(photon_modes(2), make_config("01"));
        s.apply_two_mode_mixer(0, 1, rotation(1.234));
        REQUIRE(s.kept_probability() == Approx(1.0).margin(1e-14));
        REQUIRE(s.loss_probability() == 0.0);
    }
    SECTION("rejects a non-unitary matrix") {
        QuantumState s(photon_modes(2), make_config("10"));
        QuantumState::Matrix2 bad = {{{Complex{1.0}, Complex{0.0}}, {Complex{0.1}, Complex{1.0}}}};
        REQUIRE_THROWS_AS(s.apply_two_mode_mixer(0, 1, bad), std::invalid_argument);
    }
    SECTION("rejects identical modes") {
        QuantumState s(photon_modes(2), make_config("10"));
        REQUIRE_THROWS_AS(s.apply_two_mode_mixer(0, 0, rotation(0.1)), std::invalid_argument);
    }
}

TEST_CASE("annihilate_if_coincident") {
    std::vector<ModeDescriptor> pe = {{Species::positron, "x"}, {Species::electron, "a"}};
    SECTION("coincident term is absorbed entirely") {
        QuantumState s(pe, make_config("11"));
        s.annihilate_if_coincident(0, 1);
        REQUIRE(s.term_count() == 0);
        REQUIRE(s.loss_probability() == Approx(1.0));
    }
    SECTION("non-coincident term is untouched") {
        QuantumState s(pe, make_config("01"));
        s.annihilate_if_coincident(0, 1);
        REQUIRE(s.amplitude(make_config("01")) == Complex{1.0});
        REQUIRE(s.loss_probability() == 0.0);
    }
    SECTION("superposition loses exactly the coincident weight") {
        // |amp|^2 of the removed term is 1/2: summing squared magnitudes by hand
        const double r = 1.0 / std::sqrt(2.0);
        auto s = QuantumState::from_terms(pe, {{make_config("11"), Complex{r}},
                                               {make_config("00"), Complex{r}}});
        s.annihilate_if_coincident(0, 1);
        REQUIRE(s.loss_probability() == Approx(0.5).margin(1e-12));
        REQUIRE(std::abs(s.amplitude(make_config("00")) - Complex{r}) < 1e-12);
    }
    SECTION("idempotent") {
        const double r = 1.0 / std::sqrt(2.0);
        auto s = QuantumState::from_terms(pe, {{make_config("11"), Complex{r}},
                                               {make_config("01"), Complex{r}}});
        s.annihilate_if_coincident(0, 1);
        const double loss = s.loss_probability();
        s.annihilate_if_coincident(0, 1);
        REQUIRE(s.loss_probability() == loss);
    }
    SECTION("requires an annihilating species pair") {
        QuantumState s(photon_modes(2), make_config("11"));
        REQUIRE_THROWS_AS(s.annihilate_if_coincident(0, 1), std::invalid_argument);
    }
    SECTION("rejects the same mode twice") {
        QuantumState s(pe, make_config("11"));
        REQUIRE_THROWS_AS(s.annihilate_if_coincident(0, 0), std::invalid_argument);
    }
}

TEST_CASE("permute_modes") {
    SECTION("identity") {
        QuantumState s(photon_modes(3), make_config("010"));
        s.permute_modes({0, 1, 2});
        REQUIRE(s.amplitude(make_config("010")) == Complex{1.0});
    }
    SECTION("a transposition moves the occupancy bit") {
        // the D/E exchange of the measurement network: bit moves, amplitude intact
        const double r = 1.0 / std::sqrt(2.0);
        auto s = QuantumState::from_terms(photon_modes(3), {{make_config("100"), Complex{r}},
                                                            {make_config("010"), Complex{-r}}});
        s.swap_modes(1, 2);
        REQUIRE(std::abs(s.amplitude(make_config("001")) - Complex{-r}) < 1e-12);
        REQUIRE(std::abs(s.amplitude(make_config("100")) - Complex{r}) < 1e-12);
    }
    SECTION("transposition squared is the identity") {
        QuantumState s(photon_modes(3), make_config("011"));
        s.swap_modes(0, 2);
        s.swap_modes(0, 2);
        REQUIRE(s.amplitude(make_config("011")) == Complex{1.0});
    }
    SECTION("rejects non-bijective maps") {
        QuantumState s(photon_modes(3), make_config("010"));
        REQUIRE_THROWS_AS(s.permute_modes({0, 0, 2}), std::invalid_argument);
        REQUIRE_THROWS_AS(s.permute_modes({0, 1}), std::invalid_argument);
    }
    SECTION("rejects species-changing maps") {
        QuantumState s({{Species::photon, "a"}, {Species::electron, "b"}}, make_config("10"));
        REQUIRE_THROWS_AS(s.swap_modes(0, 1), std::invalid_argument);
    }
}

TEST_CASE("particle bookkeeping") {
    QuantumState s;
    const ModeId a = s.add_mode({Species::electron, "a"});
    const ModeId b = s.add_mode({Species::electron, "b"});
    s.add_particle(b);
    REQUIRE(s.num_modes() == 2);
    OccupationConfig want;
    want.set(b, true);
    REQUIRE(s.amplitude(want) == Complex{1.0});
    SECTION("occupied modes reject a second particle") {
        REQUIRE_THROWS_AS(s.add_particle(b), std::invalid_argument);
    }
    SECTION("fresh modes are empty in every term") {
        const ModeId c = s.add_mode({Species::electron, "c"});
        for (const auto& [cfg, amp] : s.terms()) REQUIRE_FALSE(cfg.get(c));
    }
    (void)a;
}

TEST_CASE("collapse and renormalization") {
    const double r = 1.0 / std::sqrt(2.0);
    auto make = [&] {
        return QuantumState::from_terms(photon_modes(2), {{make_config("10"), Complex{r}},
                                                          {make_config("01"), Complex{r}}});
    };
    SECTION("collapse keeps the selected branch at unit norm") {
        auto s = make();
        const double p = s.collapse(0, 1);
        REQUIRE(p == Approx(0.5).margin(1e-12));
        REQUIRE(std::abs(s.amplitude(make_config("10")) - Complex{1.0}) < 1e-12);
        REQUIRE(s.kept_probability() == Approx(1.0).margin(1e-12));
    }
    SECTION("zero-probability branches throw") {
        QuantumState s(photon_modes(2), make_config("10"));
        REQUIRE_THROWS_AS(s.collapse(1, 1), ZeroProbabilityError);
    }
    SECTION("renormalize_kept clears the loss sink") {
        std::vector<ModeDescriptor> pe = {{Species::positron, "x"}, {Species::electron, "a"}};
        auto s = QuantumState::from_terms(pe, {{make_config("11"), Complex{r}},
                                               {make_config("01"), Complex{r}}});
        s.annihilate_if_coincident(0, 1);
        s.renormalize_kept();
        REQUIRE(s.loss_probability() == 0.0);
        REQUIRE(s.kept_probability() == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("conservation holds through random operation sequences") {
    std::mt19937_64 rng(777);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<ModeDescriptor> modes = {{Species::positron, "x"},
                                             {Species::electron, "a"},
                                             {Species::electron, "b"},
                                             {Species::electron, "c"}};
        QuantumState s(modes, make_config(trial % 2 ? "1010" : "0101"));
        for (int op = 0; op < 40; ++op) {
            const int pick = static_cast<int>(rng() % 4);
            if (pick == 0) {
                s.apply_two_mode_mixer(1, 2, rotation(6.28 * uniform()));
            } else if (pick == 1) {
                s.apply_two_mode_mixer(2, 3, rotation(6.28 * uniform()));
            } else if (pick == 2) {
                s.annihilate_if_coincident(0, 1);
            } else {
                s.swap_modes(1, 3);
            }
            REQUIRE(std::abs(s.total_probability() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("operations stay within their support") {
    // a mixer can at most double the term count (each term's mixed partner),
    // everything else never grows the map
    std::vector<ModeDescriptor> pe = {{Species::positron, "x"},
                                      {Species::electron, "a"},
                                      {Species::electron, "b"}};
    const double r = 1.0 / std::sqrt(2.0);
    auto s = QuantumState::from_terms(pe, {{make_config("101"), Complex{r}},
                                           {make_config("110"), Complex{r}}});
    const std::size_t before = s.term_count();
    s.apply_two_mode_mixer(1, 2, rotation(0.3));
    REQUIRE(s.term_count() <= 2 * before);
    const std::size_t mixed = s.term_count();
    s.swap_modes(1, 2);
    REQUIRE(s.term_count() <= mixed);
    s.annihilate_if_coincident(0, 1);
    REQUIRE(s.term_count() <= mixed);
}

TEST_CASE("tiny amplitudes are pruned") {
    QuantumState s(photon_modes(2), make_config("10"));
    // rotate by an angle so small that the split-off amplitude dips below
    // the prune threshold
    s.apply_two_mode_mixer(0, 1, rotation(1e-16));
    REQUIRE(s.term_count() == 1);
}
