#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "theme_lab/errors.hpp"
#include "theme_lab/families.hpp"
#include "theme_lab/homs.hpp"
#include "theme_lab/json_io.hpp"
#include "theme_lab/normalform.hpp"
#include "theme_lab/opalg.hpp"
#include "theme_lab/theme.hpp"
#include "theme_lab/xi.hpp"

using namespace theme_lab;

namespace {

enum class Format { text, json };

struct Globals {
    std::optional<int> precision;
    Format format = Format::text;
    bool strict = false;
};

/* A command result: machine form, extra human lines, certification. */
struct Report {
    Json json = Json::object();
    std::vector<std::string> text;
    bool certified = true;
};

std::optional<int> env_precision()
{
    const char* v = std::getenv("THEMELAB_PRECISION");
    if (!v || !*v) return std::nullopt;
    try {
        std::size_t used = 0;
        int p = std::stoi(v, &used);
        if (used != std::string(v).size() || p <= 0) throw InputError("");
        return p;
    } catch (...) {
        throw InputError(std::string("THEMELAB_PRECISION must be a positive integer, got ") + v);
    }
}

ThemeModule load_module(const Globals& g, const std::string& arg)
{
    LoadedPresentation lp = presentation_from_json(load_json_arg(arg));
    lp.presentation.validate();
    std::optional<int> M = g.precision;
    if (!M) M = lp.precision;
    if (!M) M = env_precision();
    return ThemeModule::from_presentation(lp.presentation, M);
}

void text_value(std::ostream& os, const Json& v, int indent);

void text_object(std::ostream& os, const Json& o, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, v] : o.items()) {
        os << pad << key << ":";
        if (v.is_object() && !v.empty()) {
            os << "\n";
            text_object(os, v, indent + 2);
        } else {
            os << " ";
            text_value(os, v, indent);
            if (!v.is_array() || v.empty() || !v.front().is_object()) os << "\n";
        }
    }
}

void text_value(std::ostream& os, const Json& v, int indent)
{
    if (v.is_string()) {
        os << v.get<std::string>();
    } else if (v.is_array()) {
        bool flat = true;
        for (const auto& e : v) flat = flat && !e.is_object();
        if (flat) {
            os << "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ", ";
                text_value(os, v[i], indent);
            }
            os << "]";
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) {
                os << (i ? "" : "\n") << std::string(static_cast<std::size_t>(indent + 2), ' ') << "- [" << i << "]\n";
                text_object(os, v[i], indent + 4);
            }
        }
    } else {
        os << v.dump();
    }
}

int emit(const Globals& g, const Report& r)
{
    if (g.format == Format::json) {
        std::cout << r.json.dump(2) << "\n";
    } else {
        std::ostringstream os;
        text_object(os, r.json, 0);
        for (const auto& line : r.text) os << line << "\n";
        std::cout << os.str();
    }
    if (g.strict && !r.certified) {
        std::cerr << "uncertified result under --strict\n";
        return 4;
    }
    return 0;
}

Json poly_json(const BernsteinPoly& p)
{
    Json c = Json::array(), roots = Json::array();
    for (const auto& q : p.coeffs) c.push_back(rational_json(q));
    for (const auto& q : p.roots) roots.push_back(rational_json(q));
    return Json{{"coeffs", c}, {"roots", roots}, {"factored", p.factored()}};
}

Json lambdas_json(const std::vector<Rational>& v)
{
    Json a = Json::array();
    for (const auto& q : v) a.push_back(rational_json(q));
    return a;
}

/* ---------- op ---------- */

Json chain_json(const FactorChain& c)
{
    Json S = Json::array();
    for (const auto& u : c.units) {
        std::vector<std::string> cs = u.to_strings();
        while (cs.size() > 1 && cs.back() == "0") cs.pop_back();
        S.push_back(cs);
    }
    return Json{{"kind", "chain"}, {"expression", c.to_string()}, {"lambda", lambdas_json(c.lambdas)}, {"S", S}};
}

Json normal_json(const OpNormal& op)
{
    Json terms = Json::array();
    for (const auto& [nu, poly] : op.terms()) {
        Json c = Json::array();
        for (const auto& q : poly) c.push_back(rational_json(q));
        terms.push_back(Json{{"b_power", nu}, {"a_coeffs", c}});
    }
    return Json{{"kind", "normal"}, {"expression", op.to_string()}, {"b_truncation", op.b_truncation()}, {"terms", terms}};
}

std::string expression_arg(const std::string& arg)
{
    std::size_t first = arg.find_first_not_of(" \t\r\n");
    const bool json_file = arg.size() > 5 && arg.compare(arg.size() - 5, 5, ".json") == 0;
    if (json_file || (first != std::string::npos && arg[first] == '{')) {
        Json j = load_json_arg(arg);
        if (!j.contains("expression") || !j.at("expression").is_string()) throw InputError("JSON input needs an \"expression\" string");
        return j.at("expression").get<std::string>();
    }
    return arg;
}

int b_trunc(const Globals& g)
{
    if (g.precision) return *g.precision;
    if (auto e = env_precision()) return *e;
    return 16;
}

Report op_parse(const Globals& g, const std::string& expr)
{
    Report r;
    ParsedOperator p = parse_operator(expression_arg(expr), b_trunc(g));
    if (const auto* c = std::get_if<FactorChain>(&p))
        r.json = chain_json(*c);
    else
        r.json = normal_json(std::get<OpNormal>(p));
    return r;
}

Report op_normalize(const Globals& g, const std::string& expr)
{
    Report r;
    r.json = normal_json(normalize(expression_arg(expr), b_trunc(g)));
    return r;
}

/* ---------- theme ---------- */

Report theme_info(const Globals& g, const std::string& file)
{
    ThemeModule E = load_module(g, file);
    Report r;
    FundInvariants inv = fundamental_invariants_checked(E);
    BernsteinData bd = bernstein(E);
    StabilityReport st = is_stable(E);
    r.certified = st.certified;
    r.json = Json{{"presentation", presentation_to_json(E.presentation(), E.precision())},
                  {"invariants", invariants_to_json(inv)},
                  {"bernstein_element", bd.element.to_string()},
                  {"bernstein_polynomial", poly_json(bd.poly)},
                  {"stable", st.stable},
                  {"end_dim", st.end_dim},
                  {"property_U", to_string(property_U_status(E))},
                  {"certified", r.certified}};
    return r;
}

Report theme_realize(const Globals& g, const std::string& file)
{
    ThemeModule E = load_module(g, file);
    Report r;
    XiElement phi = realize_in_xi(E);
    SpanBasis span = span_rank(a_orbit(phi, E.rank() + 1));
    r.certified = span.certified();
    r.json = Json{{"presentation", presentation_to_json(E.presentation(), E.precision())},
                  {"xi_precision", phi.precision()},
                  {"span_rank", span.rank()},
                  {"certified", r.certified},
                  {"xi", xi_to_json(phi)}};
    if (g.format == Format::text) {
        r.json.erase("xi");
        r.text.push_back("phi = " + render_monomial(phi));
    }
    return r;
}

XiElement load_phi(const Globals& g, const std::string& file)
{
    Json j = load_json_arg(file);
    if (j.contains("blocks")) return xi_from_json(j);
    if (j.contains("xi") && !j.contains("lambda")) return xi_from_json(j.at("xi"));
    return realize_in_xi(load_module(g, file));
}

Report theme_jh(const Globals& g, const std::string& file)
{
    XiElement phi = load_phi(g, file);
    JHFiltration jh = jordan_holder(phi);
    ThemePresentation pres = jh.presentation();
    Report r;
    r.certified = jh.certified;
    Json ranks = Json::array();
    for (const auto& F : jh.F) ranks.push_back(F.rank());
    int prec = pres.units.empty() ? phi.precision() : pres.units.front().prec();
    r.json = Json{{"lambda_bar", rational_json(jh.lambda_bar)},
                  {"lambdas", lambdas_json(jh.lambdas)},
                  {"invariants", invariants_to_json(jh.invariants())},
                  {"filtration_ranks", ranks},
                  {"presentation", presentation_to_json(pres, prec)},
                  {"certified", r.certified}};
    return r;
}

Report theme_canon(const Globals& g, const std::string& file)
{
    ThemeModule E = load_module(g, file);
    CanonicalForm cf = canonical_form(E);
    Report r;
    r.certified = cf.certified;
    Json out = presentation_to_json(cf.presentation, E.precision(), cf.certified);
    out["property_U"] = to_string(property_U_status(E));
    out["generator"] = elem_to_json(cf.generator);
    if (g.format == Format::text) {
        out.erase("generator");
        r.text.push_back("generator = " + render_elem(cf.generator));
    }
    r.json = out;
    return r;
}

Report theme_stable(const Globals& g, const std::string& file)
{
    ThemeModule E = load_module(g, file);
    StabilityReport st = is_stable(E);
    Report r;
    r.certified = st.certified;
    r.json = Json{{"stable", st.stable},
                  {"method_a", st.method_a},
                  {"end_dim", st.end_dim},
                  {"method_b", to_string(st.method_b)},
                  {"certified", st.certified}};
    if (st.witness) {
        if (g.format == Format::json)
            r.json["witness"] = elem_to_json(*st.witness);
        else
            r.text.push_back("witness = " + render_elem(*st.witness));
    }
    return r;
}

Report theme_dual(const Globals& g, const std::string& file, const std::string& delta_text, bool twist, bool full)
{
    ThemeModule E = load_module(g, file);
    Rational delta = parse_rational(delta_text);
    Report r;
    ThemeModule D = twist_or_dual(E, delta, twist ? TwistMode::twist : TwistMode::dual_twist);
    r.json = Json{{"mode", twist ? "twist" : "dual_twist"},
                  {"delta", rational_json(delta)},
                  {"presentation", presentation_to_json(D.presentation(), D.precision())},
                  {"invariants", invariants_to_json(D.presentation().invariants())}};
    if (full && !twist) {
        FullDual fd = full_dual(E, delta);
        r.certified = fd.certified;
        bool agree = fd.invariants_from_roots == D.presentation().invariants();
        r.json["full_dual"] = Json{{"generator_index", fd.generator_index},
                                   {"bernstein_roots", lambdas_json(fd.bernstein_roots)},
                                   {"invariants", invariants_to_json(fd.invariants_from_roots)},
                                   {"presentation", presentation_to_json(fd.presentation, D.precision())},
                                   {"agrees", agree},
                                   {"certified", fd.certified}};
    }
    r.json["certified"] = r.certified;
    return r;
}

Report theme_invariant2(const Globals& g, const std::string& file)
{
    ThemeModule E = load_module(g, file);
    Report r;
    r.json = Json{{"invariant", rational_json(rank2_invariant(E))}, {"certified", true}};
    return r;
}

Report theme_iso(const Globals& g, const std::string& a, const std::string& b)
{
    ThemeModule E = load_module(g, a), Ep = load_module(g, b);
    IsoResult res = iso_test(E, Ep);
    Report r;
    r.certified = res.certified;
    r.json = Json{{"isomorphic", res.isomorphic}, {"method", res.method}, {"certified", res.certified}};
    if (res.witness) {
        if (g.format == Format::json)
            r.json["witness"] = elem_to_json(*res.witness);
        else
            r.text.push_back("witness = " + render_elem(*res.witness));
    }
    return r;
}

/* ---------- hom ---------- */

Report hom_dim(const Globals& g, const std::string& a, const std::string& b)
{
    ThemeModule Ep = load_module(g, a), E = load_module(g, b);
    HomSpace hs = hom_space(Ep, E);
    Report r;
    r.certified = hs.certified;
    r.json = Json{{"dim", hs.dim}, {"rank_profile", hs.rank_profile}, {"precision", hs.precision}, {"certified", hs.certified}};
    if (g.format == Format::json) {
        Json basis = Json::array();
        for (const auto& y : hs.basis) basis.push_back(elem_to_json(y));
        r.json["basis"] = basis;
    } else {
        for (std::size_t i = 0; i < hs.basis.size(); ++i) r.text.push_back("basis[" + std::to_string(i) + "] = " + render_elem(hs.basis[i]));
    }
    return r;
}

Report hom_inject(const Globals& g, const std::string& a, const std::string& b)
{
    ThemeModule Ep = load_module(g, a), E = load_module(g, b);
    InjectionReport ir = injection_exists(Ep, E);
    Report r;
    r.certified = ir.certified;
    r.json = Json{{"exists", ir.exists}, {"certified", ir.certified}};
    if (!ir.obstruction.empty()) r.json["obstruction"] = ir.obstruction;
    if (ir.witness) {
        if (g.format == Format::json)
            r.json["witness"] = elem_to_json(*ir.witness);
        else
            r.text.push_back("witness = " + render_elem(*ir.witness));
    }
    return r;
}

Report hom_ext(const Globals& g, const std::string& a, const std::string& b)
{
    ThemeModule Ep = load_module(g, a), E = load_module(g, b);
    ExtDims d = ext_dims(Ep, E);
    Report r;
    r.certified = d.certified;
    r.json = Json{{"hom", d.hom}, {"ext1", d.ext1}, {"euler", d.ext1 - d.hom}, {"precision", d.precision}, {"certified", d.certified}};
    return r;
}

/* ---------- family ---------- */

Report family_space_cmd(const std::string& inv_file)
{
    Report r;
    r.json = family_space_to_json(family_space(invariants_from_json(load_json_arg(inv_file))));
    return r;
}

Report family_eval_cmd(const Globals& g, const std::string& inv_file, const std::string& point)
{
    FamilySpace fs = family_space(invariants_from_json(load_json_arg(inv_file)));
    ThemeModule E = family_evaluate(fs, point_from_json(load_json_arg(point)), g.precision ? g.precision : env_precision());
    Report r;
    r.json = presentation_to_json(E.presentation(), E.precision());
    return r;
}

Report family_scan_cmd(const Globals& g, const std::string& inv_file, const std::string& grid_file, const std::string& xi_file)
{
    FamilySpace fs = family_space(invariants_from_json(load_json_arg(inv_file)));
    std::vector<FamilyPoint> grid = grid_from_json(fs, load_json_arg(grid_file));
    std::optional<ParamXi> px;
    if (!xi_file.empty()) px = param_xi_from_json(load_json_arg(xi_file));
    StratReport rep = family_scan(fs, grid, px, g.precision ? g.precision : env_precision());
    Report r;
    r.certified = rep.certified;
    r.json = scan_to_json(rep);
    return r;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"theme-lab: exact computations with themes over the (a,b)-algebra"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::string format = "text";
    int precision = 0;
    app.add_option("--precision", precision, "truncation precision overriding the per-task default")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--strict", g.strict, "exit with status 4 on uncertified results");

    std::string arg1, arg2, delta, inv_file, grid_file, xi_file, point;
    bool twist = false, full = false;
    std::function<Report()> action;

    auto* op = app.add_subcommand("op", "operator parsing and normalization");
    op->require_subcommand(1);
    auto* op_p = op->add_subcommand("parse", "parse an operator expression");
    op_p->add_option("expr", arg1, "expression or JSON with an expression member")->required();
    op_p->callback([&] { action = [&] { return op_parse(g, arg1); }; });
    auto* op_n = op->add_subcommand("normalize", "normal form sum b^nu P_nu(a)");
    op_n->add_option("expr", arg1, "expression or JSON with an expression member")->required();
    op_n->callback([&] { action = [&] { return op_normalize(g, arg1); }; });

    auto* th = app.add_subcommand("theme", "single theme computations");
    th->require_subcommand(1);
    auto one_file = [&](const char* name, const char* help, std::function<Report()> f) {
        auto* c = th->add_subcommand(name, help);
        c->add_option("E", arg1, "presentation JSON file or inline JSON")->required();
        c->callback([&action, f] { action = f; });
        return c;
    };
    one_file("info", "invariants, Bernstein data and stability", [&] { return theme_info(g, arg1); });
    one_file("realize", "embedding into Xi", [&] { return theme_realize(g, arg1); });
    one_file("jh", "Jordan-Holder sequence (presentation or Xi element)", [&] { return theme_jh(g, arg1); });
    one_file("canon", "canonical presentation", [&] { return theme_canon(g, arg1); });
    one_file("stable", "stability test", [&] { return theme_stable(g, arg1); });
    one_file("invariant2", "rank-2 invariant of E/F_{k-2}", [&] { return theme_invariant2(g, arg1); });
    auto* dual = one_file("dual", "dual twist or twist by E_delta", [&] { return theme_dual(g, arg1, delta, twist, full); });
    dual->add_option("--delta", delta, "shift delta")->required();
    dual->add_flag("--twist", twist, "plain tensor twist instead of the dual twist");
    dual->add_flag("--full", full, "also run the independent full-dual computation");
    auto* iso = th->add_subcommand("iso", "isomorphism test");
    iso->add_option("A", arg1)->required();
    iso->add_option("B", arg2)->required();
    iso->callback([&] { action = [&] { return theme_iso(g, arg1, arg2); }; });

    auto* hom = app.add_subcommand("hom", "morphisms and extensions");
    hom->require_subcommand(1);
    auto two_files = [&](const char* name, const char* help, std::function<Report()> f) {
        auto* c = hom->add_subcommand(name, help);
        c->add_option("A", arg1, "source presentation")->required();
        c->add_option("B", arg2, "target presentation")->required();
        c->callback([&action, f] { action = f; });
    };
    two_files("dim", "dimension of Hom(A, B)", [&] { return hom_dim(g, arg1, arg2); });
    two_files("inject", "existence of an injection A -> B", [&] { return hom_inject(g, arg1, arg2); });
    two_files("ext", "dimensions of Hom and Ext1", [&] { return hom_ext(g, arg1, arg2); });

    auto* fam = app.add_subcommand("family", "standard families");
    fam->require_subcommand(1);
    auto* fs = fam->add_subcommand("space", "slots of the standard family");
    fs->add_option("--invariants", inv_file)->required();
    fs->callback([&] { action = [&] { return family_space_cmd(inv_file); }; });
    auto* fe = fam->add_subcommand("eval", "presentation at one point");
    fe->add_option("--invariants", inv_file)->required();
    fe->add_option("--point", point, "point JSON file or inline JSON")->required();
    fe->callback([&] { action = [&] { return family_eval_cmd(g, inv_file, point); }; });
    auto* sc = fam->add_subcommand("scan", "stratification over a grid");
    sc->add_option("--invariants", inv_file)->required();
    sc->add_option("--grid", grid_file)->required();
    sc->add_option("--xi", xi_file, "parametrized Xi element");
    sc->callback([&] { action = [&] { return family_scan_cmd(g, inv_file, grid_file, xi_file); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (precision > 0) g.precision = precision;
    g.format = format == "json" ? Format::json : Format::text;

    try {
        return emit(g, action());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
