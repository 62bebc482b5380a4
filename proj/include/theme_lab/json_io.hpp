#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "theme_lab/families.hpp"
#include "theme_lab/homs.hpp"
#include "theme_lab/theme.hpp"
#include "theme_lab/xi.hpp"

namespace theme_lab {

using Json = nlohmann::ordered_json;

Json rational_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json series_to_json(const BSeries& s);
BSeries series_from_json(const Json& j);

struct LoadedPresentation {
    ThemePresentation presentation;
    std::optional<int> precision;
};

Json presentation_to_json(const ThemePresentation& p, int precision, std::optional<bool> canonical = std::nullopt);
/* Accepts a presentation object, or any report carrying one under "presentation". */
LoadedPresentation presentation_from_json(const Json& j);

Json invariants_to_json(const FundInvariants& inv);
/* Accepts {"lambda1","p"}, an "invariants" member, or a presentation. */
FundInvariants invariants_from_json(const Json& j);

Json xi_to_json(const XiElement& x);
XiElement xi_from_json(const Json& j);
ParamXi param_xi_from_json(const Json& j);

Json elem_to_json(const ModElem& x);

Json family_space_to_json(const FamilySpace& fs);
FamilyPoint point_from_json(const Json& j);
/* {"points":[{slot:value}...]} or {slot:[values]} expanded as a product. */
std::vector<FamilyPoint> grid_from_json(const FamilySpace& fs, const Json& j);
Json scan_to_json(const StratReport& r);

/* Parses text as JSON, or reads it as a file path when it does not start with '{'. */
Json load_json_arg(const std::string& arg);

}  // namespace theme_lab
