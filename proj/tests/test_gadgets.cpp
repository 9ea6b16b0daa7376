#include <random>

#include "doctest.h"

#include "csync/errors.hpp"
#include "csync/gadgets.hpp"
#include "csync/syncsolve.hpp"
#include "helpers.hpp"

using namespace csync;
using csync::testing::random_dcsa;
using csync::testing::re;
using csync::testing::w;

namespace {

bool well_formed(const Dcsa& a)
{
    for (int q = 1; q <= a.states(); ++q) {
        for (int x = 0; x < a.alphabet().size(); ++x) {
            int t = a.next(q, x);
            if (t < 1 || t > a.states()) {
                return false;
            }
        }
    }
    return true;
}

bool sides_agree(const GadgetOutput& g, const Dcsa& base)
{
    bool lhs = constrained_sync(base, g.base_constraint).yes;
    bool rhs = constrained_sync(g.instance, g.transformed_constraint).yes;
    return lhs == rhs;
}

// Random base over {a,b,c} whose last state is a sink entered only by c.
Dcsa sink_base(std::mt19937& rng)
{
    const int n = 2 + static_cast<int>(rng() % 3);
    Dcsa a(Alphabet::standard(3), n);
    std::uniform_int_distribution<int> other(1, n - 1);
    for (int q = 1; q < n; ++q) {
        a.set_transition(q, 0, other(rng));
        a.set_transition(q, 1, other(rng));
        a.set_transition(q, 2, rng() % 2 ? n : other(rng));
    }
    return a;
}

const std::vector<Word> b1_code = {w("bb"), w("ba")};

}  // namespace

TEST_CASE("ideal product")
{
    const Alphabet s2 = Alphabet::standard(2);
    Dcsa one(s2, 1);
    GadgetOutput g = ideal_product(one, w("ab"));
    CHECK(g.instance.states() == 3);
    Pdfa skeleton = ideal_automaton(w("ab"), s2);
    for (const auto& x : words_up_to(2, 6)) {
        CHECK(is_synchronizing_word(g.instance, x) == accepts(skeleton, x));
    }
    CHECK_THROWS_AS(ideal_product(one, {}), InputError);
    CHECK_THROWS_AS(ideal_product(one, w("a"), re("a", 3)), InputError);

    std::mt19937 rng(61);
    for (int i = 0; i < 50; ++i) {
        Dcsa a = random_dcsa(rng, 2, 1 + static_cast<int>(rng() % 3));
        for (const char* u : {"a", "ab", "bab"}) {
            GadgetOutput o = ideal_product(a, w(u), re("(a+b)*"));
            CHECK(well_formed(o.instance));
            CHECK(o.instance.states() == a.states() * (static_cast<int>(std::string(u).size()) + 1));
            CHECK(sides_agree(o, a));
        }
    }
}

TEST_CASE("ideal product with u = a is synchronized exactly by words containing a")
{
    std::mt19937 rng(67);
    for (int i = 0; i < 30; ++i) {
        Dcsa a = random_dcsa(rng, 2, 1 + static_cast<int>(rng() % 3));
        GadgetOutput o = ideal_product(a, w("a"));
        for (const auto& x : words_up_to(2, 6)) {
            bool has_a = std::find(x.begin(), x.end(), 0) != x.end();
            CHECK(is_synchronizing_word(o.instance, x) == (has_a && is_synchronizing_word(a, x)));
        }
    }
}

TEST_CASE("homomorphism preimage")
{
    const Alphabet s2 = Alphabet::standard(2);
    std::mt19937 rng(71);
    Dcsa a = random_dcsa(rng, 2, 3);
    CHECK(hom_preimage_instance(a, Homomorphism::identity(s2)).instance == a);

    Homomorphism erase{s2, s2, {{}, {}}};
    GadgetOutput idle = hom_preimage_instance(a, erase);
    for (int q = 1; q <= 3; ++q) {
        CHECK(idle.instance.next(q, 0) == q);
        CHECK(idle.instance.next(q, 1) == q);
    }

    Homomorphism phi{s2, s2, {w("ab"), w("b")}};
    for (int i = 0; i < 50; ++i) {
        Dcsa base = random_dcsa(rng, 2, 1 + static_cast<int>(rng() % 3));
        GadgetOutput o = hom_preimage_instance(base, phi, re("a*b(a+b)*"));
        CHECK(well_formed(o.instance));
        CHECK(sides_agree(o, base));
        for (const auto& x : words_up_to(2, 4)) {
            CHECK(is_synchronizing_word(o.instance, x) == is_synchronizing_word(base, phi.apply(x)));
        }
    }
}

TEST_CASE("uC gadget state counts and reduction")
{
    const Alphabet s2 = Alphabet::standard(2);
    std::mt19937 rng(73);
    for (auto construction : {UcConstruction::literal, UcConstruction::tracked}) {
        for (int i = 0; i < 40; ++i) {
            Dcsa base = random_dcsa(rng, 3, 1 + static_cast<int>(rng() % 3));
            GadgetOutput o = uc_gadget(base, s2, {}, w("aa"), b1_code, construction);
            CHECK(well_formed(o.instance));
            CHECK(o.instance.states() == uc_gadget_state_count(base, w("aa"), b1_code, construction));
            CHECK(equivalent(o.transformed_constraint, re("aa(bb+ba)*")));
            CHECK(equivalent(o.base_constraint, re("a(b+c)*", 3)));
            CHECK(sides_agree(o, base));
        }
    }
}

TEST_CASE("uC gadget literal state count formula")
{
    std::mt19937 rng(79);
    Dcsa base = random_dcsa(rng, 3, 3);
    std::vector<int> image;
    for (int q = 1; q <= 3; ++q) {
        int t = base.next(q, 0);
        if (std::find(image.begin(), image.end(), t) == image.end()) {
            image.push_back(t);
        }
    }
    // Pref({bb, ba}) \ {bb, ba} = {ε, b}.
    CHECK(uc_gadget_state_count(base, w("aa"), b1_code, UcConstruction::literal) ==
          3 * 2 + static_cast<int>(image.size()) * 2);
}

TEST_CASE("uC gadget on a one-state base synchronizes with every constraint word")
{
    const Alphabet s2 = Alphabet::standard(2);
    Dcsa one(Alphabet::standard(3), 1);
    GadgetOutput o = uc_gadget(one, s2, {}, w("aa"), b1_code);
    for (const auto& x : words_up_to(2, 6)) {
        if (accepts(o.transformed_constraint, x)) {
            CHECK(is_synchronizing_word(o.instance, x));
        }
    }
}

TEST_CASE("uC gadget hypothesis checks")
{
    const Alphabet s3 = Alphabet::standard(3);
    Dcsa base(s3, 2);
    CHECK_THROWS_AS(uc_gadget(base, s3, LetterSet::of({0, 1}), w("ac"), {w("b")}), HypothesisError);
    CHECK_THROWS_AS(uc_gadget(base, s3, LetterSet::full(3), w("ac"), {w("b"), w("c")}), HypothesisError);
    // The literal construction is rejected for these parameters; the tracked one accepts them.
    CHECK_THROWS_AS(uc_gadget(base, s3, LetterSet::of({0, 1}), w("ac"), {w("b"), w("c")}, UcConstruction::literal),
                    HypothesisError);
    CHECK_NOTHROW(uc_gadget(base, s3, LetterSet::of({0, 1}), w("ac"), {w("b"), w("c")}, UcConstruction::tracked));
    try {
        uc_gadget(base, s3, LetterSet::of({0, 1}), w("ac"), {w("b")});
        FAIL("expected a hypothesis error");
    } catch (const HypothesisError& e) {
        CHECK(std::string(e.what()).find("at least two") != std::string::npos);
    }
}

TEST_CASE("C*uΓ* gadget")
{
    const Alphabet s3 = Alphabet::standard(3);
    std::mt19937 rng(83);
    for (int i = 0; i < 40; ++i) {
        Dcsa base = sink_base(rng);
        GadgetOutput o = cstar_u_gadget(base, s3, LetterSet::of({0}), w("bc"), {w("a"), w("ba")}, w("a"));
        CHECK(well_formed(o.instance));
        CHECK(equivalent(o.transformed_constraint, from_regex("(a+ba)*bca*", s3)));
        CHECK(equivalent(o.base_constraint, from_regex("(a+b)*c", s3)));
        CHECK(sides_agree(o, base));
    }
    Dcsa no_sink(s3, 2);
    no_sink.set_transition(1, 0, 2);
    no_sink.set_transition(2, 0, 1);
    CHECK(sink_entered_only_by_c(no_sink) == 0);
    CHECK_THROWS_AS(cstar_u_gadget(no_sink, s3, LetterSet::of({0}), w("bc"), {w("a"), w("ba")}, w("a")),
                    HypothesisError);
    Dcsa base = sink_base(rng);
    CHECK_THROWS_AS(cstar_u_gadget(base, s3, LetterSet::of({2}), w("bc"), {w("a"), w("ba")}, w("a")),
                    HypothesisError);
    CHECK_THROWS_AS(cstar_u_gadget(base, s3, LetterSet::of({0}), w("bc"), {w("a"), w("ba")}, w("b")),
                    HypothesisError);
}

TEST_CASE("add-loops gadget")
{
    const Alphabet s2 = Alphabet::standard(2);
    std::mt19937 rng(89);
    Dcsa one(s2, 1);
    CHECK_THROWS_AS(add_loops_gadget(one, {}), InputError);
    CHECK_THROWS_AS(add_loops_gadget(random_dcsa(rng, 2, 2), LetterSet::of({0}), re("a(a+b)*")), HypothesisError);
    for (int i = 0; i < 40; ++i) {
        Dcsa base = random_dcsa(rng, 2, 2 + static_cast<int>(rng() % 2));
        GadgetOutput empty_gamma = add_loops_gadget(base, {});
        CHECK(empty_gamma.instance.states() == 2 * base.states());
        CHECK(sides_agree(empty_gamma, base));
        GadgetOutput o = add_loops_gadget(base, LetterSet::of({1}), re("a(a+b)*"));
        CHECK(well_formed(o.instance));
        CHECK(equivalent(o.transformed_constraint, re("b*a(a+b)*")));
        CHECK(sides_agree(o, base));
    }
    Dcsa perm(s2, 2);
    perm.set_transition(1, 0, 2);
    perm.set_transition(2, 0, 1);
    GadgetOutput p = add_loops_gadget(perm, LetterSet::of({1}), re("a(a+b)*"));
    CHECK_FALSE(constrained_sync(perm, p.base_constraint).yes);
    CHECK_FALSE(constrained_sync(p.instance, p.transformed_constraint).yes);
}
