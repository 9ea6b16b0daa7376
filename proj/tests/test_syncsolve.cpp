#include <random>
#include <set>

#include "doctest.h"

#include "csync/errors.hpp"
#include "csync/syncsolve.hpp"
#include "helpers.hpp"

using namespace csync;
using csync::testing::random_dcsa;
using csync::testing::re;

namespace {

Dcsa permutation_automaton()
{
    Dcsa a(Alphabet::standard(2), 3);
    a.set_transition(1, 0, 2);
    a.set_transition(2, 0, 3);
    a.set_transition(3, 0, 1);
    a.set_transition(1, 1, 2);
    a.set_transition(2, 1, 1);
    a.set_transition(3, 1, 3);
    return a;
}

}  // namespace

TEST_CASE("pair merging")
{
    Dcsa one(Alphabet::standard(2), 1);
    SyncResult r = find_sync_word(one);
    CHECK(r.yes);
    CHECK(r.witness == Word{});

    CHECK_FALSE(find_sync_word(permutation_automaton()).yes);

    Dcsa c4 = cerny_automaton(4);
    SyncResult s = find_sync_word(c4);
    REQUIRE(s.yes);
    CHECK(is_synchronizing_word(c4, *s.witness));
    CHECK(s.witness->size() <= 27u);
}

TEST_CASE("pair merging agrees with the exact search")
{
    std::mt19937 rng(41);
    const Pdfa all = universal_pdfa(Alphabet::standard(2));
    for (int i = 0; i < 300; ++i) {
        Dcsa a = random_dcsa(rng, 2, 1 + static_cast<int>(rng() % 5));
        SyncResult fast = find_sync_word(a);
        SyncResult exact = constrained_sync(a, all);
        REQUIRE(fast.yes == exact.yes);
        if (fast.yes) {
            CHECK(is_synchronizing_word(a, *fast.witness));
            CHECK(fast.witness->size() >= exact.witness->size());
            int n = a.states();
            CHECK(static_cast<int>(fast.witness->size()) <= n * n * n);
        }
    }
}

TEST_CASE("Cerny automata reach the (n-1)^2 bound")
{
    const Pdfa all = universal_pdfa(Alphabet::standard(2));
    for (int n = 2; n <= 5; ++n) {
        SyncResult r = constrained_sync(cerny_automaton(n), all);
        REQUIRE(r.yes);
        CHECK(static_cast<int>(r.witness->size()) == (n - 1) * (n - 1));
    }
    Dcsa c4 = cerny_automaton(4);
    SyncResult r = constrained_sync(c4, all);
    CHECK(run_set(c4, {1, 2, 3, 4}, *r.witness).size() == 1u);
}

TEST_CASE("constrained search on trivial inputs")
{
    Dcsa one(Alphabet::standard(2), 1);
    SyncResult r = constrained_sync(one, re("bb*+ab"));
    REQUIRE(r.yes);
    CHECK(r.witness == Word{1});

    CHECK_FALSE(constrained_sync(permutation_automaton(), re("(a+b)*")).yes);
    CHECK_FALSE(constrained_sync(cerny_automaton(3), empty_pdfa(Alphabet::standard(2))).yes);
    CHECK_THROWS_AS(constrained_sync(one, re("a", 3)), InputError);

    SolverConfig tight;
    tight.max_input_states = 3;
    CHECK_THROWS_AS(constrained_sync(cerny_automaton(4), re("(a+b)*"), tight), ResourceError);
}

TEST_CASE("Cerny C3 under b(a+b)* matches the oracle")
{
    Dcsa c3 = cerny_automaton(3);
    Pdfa l = re("b(a+b)*");
    SyncResult exact = constrained_sync(c3, l);
    SyncResult oracle = oracle_brute_force(c3, l, 12);
    REQUIRE(exact.yes == oracle.yes);
    if (exact.yes) {
        CHECK(exact.witness == oracle.witness);
        CHECK(validate_witness(c3, l, *exact.witness));
    }
}

TEST_CASE("oracle basics")
{
    Dcsa one(Alphabet::standard(2), 1);
    SyncResult r = oracle_enumerate(one, re("a*"), 0);
    CHECK(r.yes);
    CHECK(r.witness == Word{});
    CHECK_FALSE(oracle_enumerate(cerny_automaton(3), empty_pdfa(Alphabet::standard(2)), 10).yes);
    // Shortest reset word of C4 has length 9, so a bound of 8 is not enough.
    CHECK_FALSE(oracle_enumerate(cerny_automaton(4), re("(a+b)*"), 8).yes);
    CHECK(oracle_enumerate(cerny_automaton(4), re("(a+b)*"), 9).yes);
}

TEST_CASE("solver, merged oracle and brute force agree with shortest witnesses")
{
    std::mt19937 rng(43);
    const std::vector<Pdfa> panel = {re("(a+b)*"), re("a(a+b)*"), re("(ab)*"), re("b*ab*"), re("a*ba*b(a+b)*")};
    for (int i = 0; i < 150; ++i) {
        Dcsa a = random_dcsa(rng, 2, 1 + static_cast<int>(rng() % 4));
        for (const auto& l : panel) {
            SyncResult exact = constrained_sync(a, l);
            SyncResult merged = oracle_enumerate(a, l, 10);
            SyncResult brute = oracle_brute_force(a, l, 10);
            REQUIRE(merged.yes == brute.yes);
            REQUIRE(merged.witness == brute.witness);
            if (exact.yes) {
                CHECK(validate_witness(a, l, *exact.witness));
                if (exact.witness->size() <= 10) {
                    CHECK(merged.witness == exact.witness);
                }
            } else {
                CHECK_FALSE(merged.yes);
            }
        }
    }
}

TEST_CASE("synchronizing words form a two-sided ideal")
{
    std::mt19937 rng(47);
    const Pdfa all = universal_pdfa(Alphabet::standard(2));
    auto words = words_up_to(2, 3);
    for (int i = 0; i < 100; ++i) {
        Dcsa a = random_dcsa(rng, 2, 2 + static_cast<int>(rng() % 3));
        SyncResult r = constrained_sync(a, all);
        if (!r.yes) {
            continue;
        }
        const Word& w = *r.witness;
        Word u = words[rng() % words.size()], v = words[rng() % words.size()];
        Word uwv = u;
        uwv.insert(uwv.end(), w.begin(), w.end());
        uwv.insert(uwv.end(), v.begin(), v.end());
        CHECK(is_synchronizing_word(a, uwv));
    }
}

TEST_CASE("witness validation")
{
    Dcsa c3 = cerny_automaton(3);
    Pdfa all = re("(a+b)*");
    SyncResult r = constrained_sync(c3, all);
    REQUIRE(r.yes);
    CHECK(validate_witness(c3, all, *r.witness));
    CHECK_FALSE(validate_witness(c3, re("a*"), *r.witness));
    CHECK_FALSE(validate_witness(c3, all, {0}));
}

TEST_CASE("repeated runs give the same witness")
{
    Dcsa c5 = cerny_automaton(5);
    Pdfa l = re("(a+b)*b");
    SyncResult first = constrained_sync(c5, l);
    for (int i = 0; i < 3; ++i) {
        CHECK(constrained_sync(c5, l).witness == first.witness);
    }
}
