#pragma once

#include <optional>
#include <string>
#include <vector>

#include "theme_lab/opalg.hpp"
#include "theme_lab/series.hpp"
#include "theme_lab/xi.hpp"

namespace theme_lab {

struct FundInvariants {
    Rational lambda1;
    std::vector<int> p;

    int rank() const { return static_cast<int>(p.size()) + 1; }
    std::vector<Rational> lambdas() const;
    void validate() const;
    bool operator==(const FundInvariants&) const = default;
    std::string to_string() const;
};

/*
 * lambdas l_1..l_k and units S_1..S_{k-1} (constant term 1).
 * An exact unit is a polynomial known to every order; otherwise it is
 * only known up to its stored precision.
 */
struct ThemePresentation {
    std::vector<Rational> lambdas;
    std::vector<BSeries> units;
    std::vector<bool> exact;

    static ThemePresentation from_polys(std::vector<Rational> lambdas, const std::vector<std::vector<Rational>>& polys);

    int rank() const { return static_cast<int>(lambdas.size()); }
    std::vector<int> p() const;
    FundInvariants invariants() const;
    void validate() const;
    BSeries unit(int j, int M) const;
    bool operator==(const ThemePresentation& o) const;
    std::string to_string() const;
};

using ModElem = std::vector<BSeries>;

/*
 * Module with standard basis e_1..e_k:
 *   a e_{j+1} = l_{j+1} b e_{j+1} + S_j e_j,   a e_1 = l_1 b e_1,
 * and a(U x) = U a(x) + b^2 U' x. Element components are indexed from e_1.
 */
class ThemeModule {
public:
    using Elem = ModElem;

    ThemeModule(ThemePresentation pres, int M);
    static int default_precision(const ThemePresentation& pres);
    static ThemeModule from_presentation(const ThemePresentation& pres, std::optional<int> M = std::nullopt);

    int rank() const { return pres_.rank(); }
    int precision() const { return M_; }
    const ThemePresentation& presentation() const { return pres_; }
    const Rational& lambda(int j) const { return pres_.lambdas[static_cast<std::size_t>(j - 1)]; }
    const BSeries& unit(int j) const { return units_[static_cast<std::size_t>(j - 1)]; }
    Rational lambda_bar() const;
    FactorChain chain() const;
    ThemeModule with_precision(int M) const { return ThemeModule(pres_, M); }

    ModElem zero() const;
    ModElem basis(int j) const;

    ModElem act_a(const ModElem& x) const;
    ModElem act_b(const ModElem& x) const;
    ModElem mul_series(const BSeries& s, const ModElem& x) const;
    ModElem sub(const ModElem& x, const ModElem& y) const;
    ModElem add(const ModElem& x, const ModElem& y) const;
    ModElem scale(const Rational& q, const ModElem& x) const;

private:
    ThemePresentation pres_;
    int M_;
    std::vector<BSeries> units_;
};

std::string render_elem(const ModElem& x);
int top_index(const ModElem& x);

/* Images of e_1..e_k under the realization; the last one is phi. */
std::vector<XiElement> realize_basis(const ThemeModule& E, std::optional<int> xi_precision = std::nullopt);
XiElement realize_in_xi(const ThemeModule& E, std::optional<int> xi_precision = std::nullopt);
int default_xi_precision(const ThemeModule& E);

/* Image in Xi of a module element, given the images of the basis. */
XiElement image_of(const ModElem& x, const std::vector<XiElement>& basis_images);

struct JHFiltration {
    Rational lambda_bar;
    std::vector<Rational> lambdas;
    std::vector<SpanBasis> F;
    std::vector<XiElement> generators;
    std::vector<BSeries> top_units;
    bool certified = true;

    FundInvariants invariants() const;
    /* Presentation of the module generated by T_k^{-1} phi. */
    ThemePresentation presentation() const;
};

JHFiltration jordan_holder(const XiElement& phi);

FundInvariants fundamental_invariants(const ThemeModule& E);
FundInvariants fundamental_invariants_checked(const ThemeModule& E);

BernsteinData bernstein(const ThemeModule& E);

ThemeModule quotient_by_F(const ThemeModule& E, int j);
ThemeModule sub_F(const ThemeModule& E, int j);

enum class TwistMode { twist, dual_twist };
ThemeModule twist_or_dual(const ThemeModule& E, const Rational& delta, TwistMode mode);

/* Independent dual computation through Hom_b(E, E_0) and a generator search. */
struct FullDual {
    int generator_index = 0;
    std::vector<std::vector<BSeries>> a_matrix;
    std::vector<BSeries> companion;
    std::vector<Rational> bernstein_roots;
    FundInvariants invariants_from_roots;
    ThemePresentation presentation;
    bool certified = true;
};
FullDual full_dual(const ThemeModule& E, const Rational& delta);

/* Solutions of a^k psi = sum_j c_j a^j psi in one block of Xi. */
std::vector<XiElement> solve_companion(const std::vector<BSeries>& c, const Rational& lambda_bar, int N, int M);

struct ExpClass {
    Rational lambda_bar;
    bool met = false;
    int coprimitive_rank = 0;
    int primitive_rank = 0;
    std::vector<Rational> primitive_lambdas;
    XiElement coprimitive_generator;
};

struct ExpDecomposition {
    int rank = 0;
    std::vector<ExpClass> classes;
    bool certified = true;

    std::vector<Rational> exp_set() const;
};

ExpDecomposition exp_decompose(const XiElement& phi);
/* rank of the primitive part E[Lambda] for a list of classes Lambda */
int primitive_rank(const XiElement& phi, const std::vector<Rational>& classes, bool* certified = nullptr);
/* ranks of E[{c_1..c_j}] for j = 1..n along the given class order */
std::vector<int> filtration_ranks(const XiElement& phi, const std::vector<Rational>& order);

}  // namespace theme_lab
