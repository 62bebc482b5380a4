#include "theme_lab/json_io.hpp"

#include <fstream>
#include <sstream>

#include "theme_lab/errors.hpp"

namespace theme_lab {

Json rational_json(const Rational& q) { return q.get_str(); }

Rational rational_from_json(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    throw InputError("rational expected, got " + j.dump());
}

Json series_to_json(const BSeries& s)
{
    Json c = Json::array();
    for (const auto& q : s.coeffs()) c.push_back(rational_json(q));
    return Json{{"coeffs", c}, {"precision", s.prec()}};
}

BSeries series_from_json(const Json& j)
{
    const Json& c = j.is_object() ? j.at("coeffs") : j;
    if (!c.is_array()) throw InputError("series coefficients must be an array");
    std::vector<Rational> v;
    for (const auto& e : c) v.push_back(rational_from_json(e));
    int prec = j.is_object() && j.contains("precision") ? j.at("precision").get<int>() : static_cast<int>(v.size());
    return BSeries(std::move(v), prec);
}

Json presentation_to_json(const ThemePresentation& p, int precision, std::optional<bool> canonical)
{
    Json lam = Json::array(), S = Json::array(), exact = Json::array();
    bool all_exact = true;
    for (const auto& l : p.lambdas) lam.push_back(rational_json(l));
    for (std::size_t j = 0; j < p.units.size(); ++j) {
        Json c = Json::array();
        for (const auto& q : p.units[j].coeffs()) c.push_back(rational_json(q));
        S.push_back(c);
        bool ex = p.exact.empty() || p.exact[j];
        exact.push_back(ex);
        all_exact = all_exact && ex;
    }
    Json out{{"lambda", lam}, {"S", S}, {"precision", precision}};
    if (!all_exact) out["exact"] = exact;
    if (canonical) out["canonical"] = *canonical;
    return out;
}

LoadedPresentation presentation_from_json(const Json& j)
{
    if (!j.is_object()) throw InputError("presentation must be a JSON object");
    if (!j.contains("lambda") && j.contains("presentation")) return presentation_from_json(j.at("presentation"));
    if (!j.contains("lambda")) throw InputError("presentation needs a \"lambda\" member");
    try {
        LoadedPresentation lp;
        std::vector<Rational> lambdas;
        for (const auto& e : j.at("lambda")) lambdas.push_back(rational_from_json(e));
        std::vector<std::vector<Rational>> polys;
        if (j.contains("S"))
            for (const auto& s : j.at("S")) {
                std::vector<Rational> c;
                for (const auto& e : s) c.push_back(rational_from_json(e));
                polys.push_back(std::move(c));
            }
        lp.presentation = ThemePresentation::from_polys(std::move(lambdas), polys);
        if (j.contains("exact")) {
            const auto& ex = j.at("exact");
            for (std::size_t i = 0; i < ex.size() && i < lp.presentation.exact.size(); ++i) lp.presentation.exact[i] = ex[i].get<bool>();
        }
        if (j.contains("precision")) lp.precision = j.at("precision").get<int>();
        return lp;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed presentation: ") + e.what());
    }
}

Json invariants_to_json(const FundInvariants& inv)
{
    Json lam = Json::array();
    for (const auto& l : inv.lambdas()) lam.push_back(rational_json(l));
    return Json{{"lambda1", rational_json(inv.lambda1)}, {"p", inv.p}, {"lambdas", lam}};
}

FundInvariants invariants_from_json(const Json& j)
{
    if (!j.is_object()) throw InputError("invariants must be a JSON object");
    if (j.contains("lambda1")) {
        FundInvariants inv;
        inv.lambda1 = rational_from_json(j.at("lambda1"));
        if (j.contains("p"))
            for (const auto& e : j.at("p")) {
                if (!e.is_number_integer()) throw InputError("p entries must be integers");
                inv.p.push_back(e.get<int>());
            }
        return inv;
    }
    if (j.contains("invariants")) return invariants_from_json(j.at("invariants"));
    return presentation_from_json(j).presentation.invariants();
}

Json xi_to_json(const XiElement& x)
{
    Json blocks = Json::object();
    for (const auto& [lam, b] : x.blocks) {
        Json rows = Json::array();
        for (const auto& r : b.rows) {
            Json c = Json::array();
            for (const auto& q : r.coeffs()) c.push_back(rational_json(q));
            rows.push_back(c);
        }
        blocks[lam.get_str()] = Json{{"N", b.N()}, {"M", b.M()}, {"c", rows}};
    }
    return Json{{"blocks", blocks}};
}

XiElement xi_from_json(const Json& j)
{
    try {
        XiElement x;
        for (const auto& [key, b] : j.at("blocks").items()) {
            Rational lam = parse_rational(key);
            check_block_key(lam);
            const int N = b.at("N").get<int>(), M = b.at("M").get<int>();
            XiBlock blk;
            const Json& c = b.at("c");
            for (int r = 0; r <= N; ++r) {
                std::vector<Rational> v(static_cast<std::size_t>(M));
                if (static_cast<std::size_t>(r) < c.size())
                    for (std::size_t m = 0; m < c[static_cast<std::size_t>(r)].size() && m < v.size(); ++m)
                        v[m] = rational_from_json(c[static_cast<std::size_t>(r)][m]);
                blk.rows.emplace_back(std::move(v), M);
            }
            x.blocks[lam] = std::move(blk);
        }
        return x;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed Xi element: ") + e.what());
    }
}

ParamXi param_xi_from_json(const Json& j)
{
    try {
        ParamXi px;
        for (const auto& [key, b] : j.at("blocks").items()) {
            Rational lam = parse_rational(key);
            check_block_key(lam);
            ParamXiBlock pb;
            pb.N = b.at("N").get<int>();
            pb.M = b.at("M").get<int>();
            for (const auto& row : b.at("c")) {
                std::vector<std::string> cells;
                for (const auto& e : row) cells.push_back(e.is_string() ? e.get<std::string>() : e.dump());
                pb.cells.push_back(std::move(cells));
            }
            px.blocks[lam] = std::move(pb);
        }
        return px;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed parametrized Xi element: ") + e.what());
    }
}

Json elem_to_json(const ModElem& x)
{
    Json out = Json::array();
    for (const auto& s : x) out.push_back(series_to_json(s));
    return out;
}

Json family_space_to_json(const FamilySpace& fs)
{
    Json slots = Json::array();
    for (const auto& s : fs.slots)
        slots.push_back(Json{{"name", s.name()}, {"identifier", s.identifier()}, {"j", s.j}, {"exponent", s.exponent},
                             {"constraint", s.nonzero ? "nonzero" : "free"}});
    Json boxes = Json::array();
    for (const auto& b : fs.boxes) {
        Json e{{"j", b.j}, {"exponents", b.exponents}};
        if (b.q) e["q"] = *b.q;
        boxes.push_back(e);
    }
    return Json{{"invariants", invariants_to_json(fs.invariants)}, {"dimension", fs.dimension()}, {"boxes", boxes}, {"slots", slots}};
}

FamilyPoint point_from_json(const Json& j)
{
    if (!j.is_object()) throw InputError("a family point must be a JSON object");
    FamilyPoint p;
    const Json& src = j.contains("sigma") ? j.at("sigma") : j;
    for (const auto& [k, v] : src.items()) p[k] = rational_from_json(v);
    return p;
}

std::vector<FamilyPoint> grid_from_json(const FamilySpace& fs, const Json& j)
{
    if (!j.is_object()) throw InputError("grid must be a JSON object");
    if (j.contains("points")) {
        std::vector<FamilyPoint> out;
        for (const auto& e : j.at("points")) out.push_back(point_from_json(e));
        return out;
    }
    std::map<std::string, std::vector<Rational>> axes;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_array()) throw InputError("grid axis " + k + " must be an array");
        for (const auto& e : v) axes[k].push_back(rational_from_json(e));
    }
    return expand_grid(fs, axes);
}

static Json point_json(const FamilyPoint& p)
{
    Json o = Json::object();
    for (const auto& [k, v] : p) o[k] = rational_json(v);
    return o;
}

Json scan_to_json(const StratReport& r)
{
    Json pts = Json::array();
    for (const auto& p : r.points) {
        Json e{{"sigma", point_json(p.sigma)},
               {"theme", p.is_theme},
               {"stable", p.stable},
               {"end_dim", p.end_dim},
               {"iso_class", p.iso_class},
               {"canonical", presentation_to_json(p.canonical, p.precision, p.canonical_certified)}};
        if (p.xi_rank) e["xi_rank"] = *p.xi_rank;
        if (p.witness)
            e["pullback_witness"] = Json{{"U", rational_json(p.witness->U)}, {"V", p.witness->V.to_string()}, {"verified", p.witness->verified}};
        pts.push_back(e);
    }
    Json strata{{"stable", r.stable_points}, {"unstable", r.unstable_points}};
    if (!r.xi_rank_strata.empty()) {
        Json xs = Json::object();
        for (const auto& [rank, idx] : r.xi_rank_strata) xs[std::to_string(rank)] = idx;
        strata["xi_rank"] = xs;
    }
    return Json{{"points", pts},
                {"strata", strata},
                {"iso_class_count", r.iso_class_count},
                {"invariants_constant", r.invariants_constant},
                {"bernstein_constant", r.bernstein_constant},
                {"bernstein_element", r.bernstein_element},
                {"witnesses_verified", r.witnesses_verified},
                {"certified", r.certified}};
}

Json load_json_arg(const std::string& arg)
{
    std::string text;
    std::size_t first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && arg[first] == '{') {
        text = arg;
    } else {
        std::ifstream in(arg);
        if (!in) throw InputError("cannot read " + arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace theme_lab
