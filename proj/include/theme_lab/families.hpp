#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "theme_lab/normalform.hpp"
#include "theme_lab/theme.hpp"
#include "theme_lab/xi.hpp"

namespace theme_lab {

/* One coefficient slot of the W_j box: coefficient of b^exponent in S_j. */
struct FamilySlot {
    int j = 0;
    int exponent = 0;
    bool nonzero = false;

    std::string name() const;
    /* identifier usable inside parameter expressions, e.g. S1_b2 */
    std::string identifier() const;
};

struct FamilySpace {
    FundInvariants invariants;
    std::vector<VjBasis> boxes;
    std::vector<FamilySlot> slots;

    int dimension() const { return static_cast<int>(slots.size()); }
    const FamilySlot* find(const std::string& name) const;
};

using FamilyPoint = std::map<std::string, Rational>;

FamilySpace family_space(const FundInvariants& inv);
ThemePresentation family_presentation(const FamilySpace& space, const FamilyPoint& point);
ThemeModule family_evaluate(const FamilySpace& space, const FamilyPoint& point, std::optional<int> M = std::nullopt);

/* Cartesian product of per-slot value lists, in slot order. */
std::vector<FamilyPoint> expand_grid(const FamilySpace& space, const std::map<std::string, std::vector<Rational>>& axes);

/* Xi element whose cells are rational expressions in the slot identifiers. */
struct ParamXiBlock {
    int N = 0;
    int M = 1;
    std::vector<std::vector<std::string>> cells;
};
struct ParamXi {
    std::map<Rational, ParamXiBlock> blocks;
};

Rational eval_expression(const std::string& text, const std::map<std::string, Rational>& vars);
XiElement instantiate(const ParamXi& px, const FamilySpace& space, const FamilyPoint& point);

/* Sections U, V with e_3 + U e_2 + V e_1 killed by P_{alpha,beta,gamma'} in E_{alpha,beta,gamma}. */
struct PullbackWitness {
    Rational U;
    BSeries V;
    bool verified = false;
};
PullbackWitness rank3_pullback_witness(const Rational& lambda, const Rational& alpha, const Rational& beta, const Rational& gamma,
                                       const Rational& gamma_target, int M);

struct ScanPoint {
    FamilyPoint sigma;
    ThemePresentation presentation;
    int precision = 0;
    bool is_theme = true;
    bool stable = false;
    int end_dim = 0;
    bool stability_certified = true;
    ThemePresentation canonical;
    bool canonical_certified = false;
    int iso_class = 0;
    std::optional<int> xi_rank;
    std::optional<PullbackWitness> witness;
};

struct StratReport {
    std::vector<ScanPoint> points;
    bool invariants_constant = true;
    bool bernstein_constant = true;
    std::string bernstein_element;
    int iso_class_count = 0;
    std::vector<int> stable_points;
    std::vector<int> unstable_points;
    std::map<int, std::vector<int>> xi_rank_strata;
    bool witnesses_verified = true;
    bool certified = true;
};

StratReport family_scan(const FamilySpace& space, const std::vector<FamilyPoint>& grid, const std::optional<ParamXi>& xi = std::nullopt,
                        std::optional<int> M = std::nullopt);

}  // namespace theme_lab
