// Human-readable and JSON forms of verdicts.

#include <sstream>

#include "json.hpp"

#include "csync/errors.hpp"
#include "csync/rules.hpp"
#include "csync/text_format.hpp"

namespace csync {

using nlohmann::json;

namespace {

// --- to JSON ---------------------------------------------------------------

json letters_json(const Alphabet& a)
{
    return json(a.letters());
}

json pdfa_json(const Pdfa& b)
{
    json trans = json::array();
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            if (int q = b.next(p, x); q != 0) {
                trans.push_back(json::array({p, b.alphabet()[x], q}));
            }
        }
    }
    return json{{"alphabet", letters_json(b.alphabet())},
                {"states", b.states()},
                {"initial", b.initial()},
                {"finals", b.finals()},
                {"transitions", trans}};
}

json set_json(LetterSet s, const Alphabet& a)
{
    json out = json::array();
    for (int x : s.elements()) {
        out.push_back(a[x]);
    }
    return out;
}

json words_json(const std::vector<Word>& ws, const Alphabet& a)
{
    json out = json::array();
    for (const Word& w : ws) {
        out.push_back(format_word(a, w));
    }
    return out;
}

json cert_json(const Certificate& c, const Alphabet& a);

struct BodyJson {
    const Alphabet& a;
    json& j;

    void operator()(const FiniteCert&) const {}
    void operator()(const ReturningCert&) const {}
    void operator()(const StartEqualsFinalCert&) const {}
    void operator()(const PolycyclicCert&) const {}
    void operator()(const UvwCert& c) const
    {
        j["U"] = pdfa_json(c.u);
        j["V"] = pdfa_json(c.v);
        j["W"] = pdfa_json(c.w);
    }
    void operator()(const UnionCert& c) const
    {
        json parts = json::array();
        for (const auto& p : c.parts) {
            parts.push_back(json{{"language", pdfa_json(p.language)}, {"certificate", cert_json(*p.certificate, a)}});
        }
        j["parts"] = parts;
    }
    void operator()(const HomCert& c) const
    {
        json images = json::array();
        for (const Word& w : c.phi.image) {
            images.push_back(format_word(c.phi.target, w));
        }
        j["phi"] = json{{"source", letters_json(c.phi.source)}, {"target", letters_json(c.phi.target)}, {"images", images}};
        j["direction"] = c.direction == HomDirection::image_of_source ? "image_of_source" : "source_is_image";
        j["source"] = pdfa_json(c.source);
        j["inner"] = cert_json(*c.inner, c.source.alphabet());
    }
    void operator()(const FactorEqCert& c) const
    {
        j["other"] = pdfa_json(c.other);
        j["inner"] = cert_json(*c.inner, a);
    }
    void operator()(const IdealRestrictionCert& c) const
    {
        j["u"] = format_word(a, c.u);
        j["factor"] = c.factor ? pdfa_json(*c.factor) : json(nullptr);
        j["inner"] = cert_json(*c.inner, a);
    }
    void operator()(const UcCert& c) const
    {
        j["variant"] = c.variant == UcVariant::gamma_u_c ? "GammaUC" : "CUGamma";
        j["Gamma"] = set_json(c.gamma, a);
        j["u"] = format_word(a, c.u);
        j["C"] = words_json(c.c, a);
    }
    void operator()(const UvuCert& c) const
    {
        j["u"] = format_word(a, c.u);
        j["v"] = format_word(a, c.v);
        j["U"] = pdfa_json(c.big_u);
    }
    void operator()(const KnownLanguageCert& c) const
    {
        j["id"] = c.id;
        j["permutation"] = c.permutation;
    }
    void operator()(const TwoStateFormulaCert& c) const
    {
        j["S11"] = set_json(c.s11, a);
        j["S12"] = set_json(c.s12, a);
        j["S21"] = set_json(c.s21, a);
        j["S22"] = set_json(c.s22, a);
    }
    void operator()(const AddPrefixLoopsCert& c) const
    {
        j["Gamma"] = set_json(c.gamma, a);
        j["base"] = pdfa_json(c.base);
        j["inner"] = cert_json(*c.inner, a);
    }
};

json cert_json(const Certificate& c, const Alphabet& a)
{
    json j;
    j["kind"] = certificate_kind(c);
    j["lower"] = c.lower ? json(to_string(*c.lower)) : json(nullptr);
    j["upper"] = c.upper ? json(to_string(*c.upper)) : json(nullptr);
    std::visit(BodyJson{a, j}, c.body);
    return j;
}

// --- from JSON ---------------------------------------------------------------

Lower lower_from(const std::string& s)
{
    for (Lower l : {Lower::NoBound, Lower::NPHard, Lower::PSPACEHard}) {
        if (s == to_string(l)) {
            return l;
        }
    }
    throw InputError("unknown lower bound '" + s + "'");
}

Upper upper_from(const std::string& s)
{
    for (Upper u : {Upper::P, Upper::NP, Upper::PSPACE}) {
        if (s == to_string(u)) {
            return u;
        }
    }
    throw InputError("unknown upper bound '" + s + "'");
}

Alphabet alphabet_from(const json& j)
{
    return Alphabet(j.get<std::vector<std::string>>());
}

Pdfa pdfa_from(const json& j)
{
    Alphabet a = alphabet_from(j.at("alphabet"));
    Pdfa b(a, j.at("states").get<int>());
    for (const auto& t : j.at("transitions")) {
        int x = a.index_of(t.at(1).get<std::string>());
        if (x < 0) {
            throw InputError("transition letter not in alphabet");
        }
        b.set_transition(t.at(0).get<int>(), x, t.at(2).get<int>());
    }
    b.set_initial(j.at("initial").get<int>());
    for (int f : j.at("finals").get<std::vector<int>>()) {
        b.set_final(f);
    }
    return b;
}

LetterSet set_from(const json& j, const Alphabet& a)
{
    LetterSet s;
    for (const auto& tok : j) {
        int x = a.index_of(tok.get<std::string>());
        if (x < 0) {
            throw InputError("letter '" + tok.get<std::string>() + "' not in alphabet");
        }
        s.insert(x);
    }
    return s;
}

Word word_from(const json& j, const Alphabet& a)
{
    return parse_word(a, j.get<std::string>());
}

Certificate cert_from(const json& j, const Alphabet& a)
{
    const std::string kind = j.at("kind").get<std::string>();
    auto inner = [&](const Alphabet& alpha) { return std::make_shared<const Certificate>(cert_from(j.at("inner"), alpha)); };
    CertificateBody body;
    if (kind == "Finite") {
        body = FiniteCert{};
    } else if (kind == "Returning") {
        body = ReturningCert{};
    } else if (kind == "StartEqualsFinal") {
        body = StartEqualsFinalCert{};
    } else if (kind == "Polycyclic") {
        body = PolycyclicCert{};
    } else if (kind == "UVW") {
        body = UvwCert{pdfa_from(j.at("U")), pdfa_from(j.at("V")), pdfa_from(j.at("W"))};
    } else if (kind == "Union") {
        UnionCert u;
        for (const auto& p : j.at("parts")) {
            u.parts.push_back({pdfa_from(p.at("language")),
                               std::make_shared<const Certificate>(cert_from(p.at("certificate"), a))});
        }
        body = u;
    } else if (kind == "Hom") {
        const json& phi = j.at("phi");
        Homomorphism h{alphabet_from(phi.at("source")), alphabet_from(phi.at("target")), {}};
        for (const auto& w : phi.at("images")) {
            h.image.push_back(word_from(w, h.target));
        }
        Pdfa source = pdfa_from(j.at("source"));
        auto dir = j.at("direction").get<std::string>() == "image_of_source" ? HomDirection::image_of_source
                                                                         : HomDirection::source_is_image;
        body = HomCert{h, source, dir, inner(source.alphabet())};
    } else if (kind == "FactorEq") {
        body = FactorEqCert{pdfa_from(j.at("other")), inner(a)};
    } else if (kind == "IdealRestriction") {
        std::optional<Pdfa> factor;
        if (j.contains("factor") && !j.at("factor").is_null()) {
            factor = pdfa_from(j.at("factor"));
        }
        body = IdealRestrictionCert{word_from(j.at("u"), a), inner(a), factor};
    } else if (kind == "UCPattern") {
        std::vector<Word> c;
        for (const auto& w : j.at("C")) {
            c.push_back(word_from(w, a));
        }
        auto variant = j.at("variant").get<std::string>() == "GammaUC" ? UcVariant::gamma_u_c : UcVariant::c_u_gamma;
        body = UcCert{set_from(j.at("Gamma"), a), word_from(j.at("u"), a), c, variant};
    } else if (kind == "UVUPattern") {
        body = UvuCert{word_from(j.at("u"), a), word_from(j.at("v"), a), pdfa_from(j.at("U"))};
    } else if (kind == "KnownLanguage") {
        body = KnownLanguageCert{j.at("id").get<std::string>(), j.at("permutation").get<std::vector<int>>()};
    } else if (kind == "TwoStateFormula") {
        body = TwoStateFormulaCert{set_from(j.at("S11"), a), set_from(j.at("S12"), a), set_from(j.at("S21"), a),
                                   set_from(j.at("S22"), a)};
    } else if (kind == "AddPrefixLoops") {
        body = AddPrefixLoopsCert{set_from(j.at("Gamma"), a), pdfa_from(j.at("base")), inner(a)};
    } else {
        throw InputError("unknown certificate kind '" + kind + "'");
    }
    Certificate c{body, std::nullopt, std::nullopt};
    if (!j.at("lower").is_null()) {
        c.lower = lower_from(j.at("lower").get<std::string>());
    }
    if (!j.at("upper").is_null()) {
        c.upper = upper_from(j.at("upper").get<std::string>());
    }
    return c;
}

// --- human report ------------------------------------------------------------

std::string bounds_text(const Certificate& c)
{
    std::string s;
    if (c.lower) {
        s += std::string("lower ") + to_string(*c.lower);
    }
    if (c.upper) {
        s += (s.empty() ? "" : ", ") + std::string("upper ") + to_string(*c.upper);
    }
    return s;
}

std::string set_text(LetterSet s, const Alphabet& a)
{
    std::string out = "{";
    bool first = true;
    for (int x : s.elements()) {
        out += (first ? "" : ",") + a[x];
        first = false;
    }
    return out + "}";
}

std::string word_text(const Alphabet& a, const Word& w)
{
    return w.empty() ? "ε" : format_word(a, w);
}

void automaton_text(std::ostringstream& out, const std::string& indent, const std::string& name, const Pdfa& b)
{
    out << indent << name << ":\n";
    std::istringstream lines(to_text(b));
    for (std::string line; std::getline(lines, line);) {
        out << indent << "  " << line << '\n';
    }
}

void cert_text(std::ostringstream& out, const Certificate& c, const Alphabet& a, int depth)
{
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    out << indent << "- " << certificate_kind(c) << " [" << bounds_text(c) << "]\n";
    const std::string more = indent + "  ";
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, UvwCert>) {
                automaton_text(out, more, "U", body.u);
                automaton_text(out, more, "V", body.v);
                automaton_text(out, more, "W", body.w);
            } else if constexpr (std::is_same_v<T, UnionCert>) {
                for (const auto& p : body.parts) {
                    automaton_text(out, more, "part", p.language);
                    cert_text(out, *p.certificate, a, depth + 2);
                }
            } else if constexpr (std::is_same_v<T, HomCert>) {
                out << more << "phi:";
                for (int x = 0; x < body.phi.source.size(); ++x) {
                    out << ' ' << body.phi.source[x] << "->" << word_text(body.phi.target, body.phi.image[x]);
                }
                out << "\n" << more << "direction: "
                    << (body.direction == HomDirection::image_of_source ? "image of source" : "source is image")
                    << '\n';
                automaton_text(out, more, "source", body.source);
                cert_text(out, *body.inner, body.source.alphabet(), depth + 1);
            } else if constexpr (std::is_same_v<T, FactorEqCert>) {
                automaton_text(out, more, "other", body.other);
                cert_text(out, *body.inner, a, depth + 1);
            } else if constexpr (std::is_same_v<T, IdealRestrictionCert>) {
                if (body.factor) {
                    automaton_text(out, more, "factor", *body.factor);
                } else {
                    out << more << "u: " << word_text(a, body.u) << '\n';
                }
                cert_text(out, *body.inner, a, depth + 1);
            } else if constexpr (std::is_same_v<T, UcCert>) {
                out << more << "variant: " << (body.variant == UcVariant::gamma_u_c ? "Γ*uC*" : "C*uΓ*") << '\n';
                out << more << "Γ: " << set_text(body.gamma, a) << '\n';
                out << more << "u: " << word_text(a, body.u) << '\n';
                out << more << "C: {";
                for (std::size_t i = 0; i < body.c.size(); ++i) {
                    out << (i ? ", " : "") << word_text(a, body.c[i]);
                }
                out << "}\n";
            } else if constexpr (std::is_same_v<T, UvuCert>) {
                out << more << "u: " << word_text(a, body.u) << '\n';
                out << more << "v: " << word_text(a, body.v) << '\n';
                automaton_text(out, more, "U", body.big_u);
            } else if constexpr (std::is_same_v<T, KnownLanguageCert>) {
                out << more << "id: " << body.id;
                if (const KnownLanguage* k = find_known(body.id)) {
                    out << " (" << k->description << ")";
                }
                out << "\n" << more << "permutation:";
                for (int p : body.permutation) {
                    out << ' ' << p;
                }
                out << '\n';
            } else if constexpr (std::is_same_v<T, TwoStateFormulaCert>) {
                out << more << "S11=" << set_text(body.s11, a) << " S12=" << set_text(body.s12, a)
                    << " S21=" << set_text(body.s21, a) << " S22=" << set_text(body.s22, a) << '\n';
            } else if constexpr (std::is_same_v<T, AddPrefixLoopsCert>) {
                out << more << "Γ: " << set_text(body.gamma, a) << '\n';
                automaton_text(out, more, "base", body.base);
                cert_text(out, *body.inner, a, depth + 1);
            }
        },
        c.body);
}

}  // namespace

std::string verdict_report(const Verdict& v, const Alphabet& alphabet)
{
    std::ostringstream out;
    out << "verdict: " << v.summary() << '\n';
    out << "lower: " << to_string(v.lower) << '\n';
    out << "upper: " << to_string(v.upper) << '\n';
    out << "certificates:";
    if (v.certificates.empty()) {
        out << " none (PSPACE membership holds for every regular constraint)";
    }
    out << '\n';
    for (const auto& c : v.certificates) {
        cert_text(out, c, alphabet, 1);
    }
    return out.str();
}

std::string verdict_to_json(const Verdict& v, const Alphabet& alphabet)
{
    json j;
    j["alphabet"] = letters_json(alphabet);
    j["summary"] = v.summary();
    j["lower"] = to_string(v.lower);
    j["upper"] = to_string(v.upper);
    j["resolved"] = v.resolved();
    json certs = json::array();
    for (const auto& c : v.certificates) {
        certs.push_back(cert_json(c, alphabet));
    }
    j["certificates"] = certs;
    return j.dump(2) + "\n";
}

Verdict verdict_from_json(const std::string& text)
{
    try {
        json j = json::parse(text);
        Alphabet a = alphabet_from(j.at("alphabet"));
        Verdict v;
        v.lower = lower_from(j.at("lower").get<std::string>());
        v.upper = upper_from(j.at("upper").get<std::string>());
        for (const auto& c : j.at("certificates")) {
            v.certificates.push_back(cert_from(c, a));
        }
        check_consistency(v.lower, v.upper);
        return v;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed verdict JSON: ") + e.what());
    }
}

}  // namespace csync
