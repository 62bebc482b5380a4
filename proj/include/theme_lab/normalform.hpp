#pragma once

#include <optional>
#include <string>
#include <vector>

#include "theme_lab/homs.hpp"
#include "theme_lab/theme.hpp"

namespace theme_lab {

struct VjBasis {
    int j = 0;
    std::vector<int> exponents;
    std::optional<int> q;
};

VjBasis vj_basis(const FundInvariants& inv, int j);

struct Supplementary {
    BSeries alpha;
    BSeries v;
    bool certified = true;
};

/* x = P_j(alpha) + v in E_{lambda_j}, with v supported on the V_j exponents. */
Supplementary supplementary_decompose(const BSeries& x, const Rational& lambda_j, const FactorChain& Pj);

struct CanonicalForm {
    ThemePresentation presentation;
    /* generator realizing the presentation, in the coordinates of the input module */
    ModElem generator;
    bool certified = false;
};

CanonicalForm canonical_form(const ThemeModule& E);
Rational rank2_invariant(const ThemeModule& E);

enum class PropertyU { U, notU, unknown };
const char* to_string(PropertyU u);
PropertyU property_U_status(const ThemeModule& E);

struct IsoResult {
    bool isomorphic = false;
    std::string method;
    std::optional<ModElem> witness;
    bool certified = true;
};
IsoResult iso_test(const ThemeModule& E, const ThemeModule& Ep);

}  // namespace theme_lab
