#pragma once

#include <optional>
#include <string>
#include <vector>

#include "theme_lab/elim.hpp"
#include "theme_lab/theme.hpp"

namespace theme_lab {

/* Kernel of P' acting on E: images y of the generator of E' under morphisms E' -> E. */
struct HomSpace {
    int dim = 0;
    std::vector<ModElem> basis;
    std::vector<int> rank_profile;
    int precision = 0;
    bool certified = true;
};

HomSpace hom_space(const ThemeModule& Ep, const ThemeModule& E, std::optional<int> extra_precision = std::nullopt);

/* Matrix of the morphism E -> E sending e_k to y, as images of e_1..e_k. */
std::vector<ModElem> endomorphism_images(const ThemeModule& E, const ModElem& y);
ModElem apply_endomorphism(const std::vector<ModElem>& images, const ModElem& x);

struct EndInfo {
    int dim = 0;
    std::optional<ModElem> nilpotent;
    std::vector<int> power_ranks;
    bool certified = true;
};
EndInfo end_dimension(const ThemeModule& E);

struct StabilityReport {
    bool stable = false;
    bool method_a = false;
    int end_dim = 0;
    Verdict method_b = Verdict::uncertain;
    std::optional<ModElem> witness;
    bool certified = true;
};
StabilityReport is_stable(const ThemeModule& E);

struct InjectionReport {
    bool exists = false;
    std::optional<ModElem> witness;
    std::string obstruction;
    bool certified = true;
};
InjectionReport injection_exists(const ThemeModule& Ep, const ThemeModule& E);

struct ExtDims {
    int hom = 0;
    int ext1 = 0;
    int precision = 0;
    bool certified = true;
};
ExtDims ext_dims(const ThemeModule& Ep, const ThemeModule& E);

/* ext1 at one truncation level: k*M minus the rank of P' on E / b^M E. */
int ext1_at(const ThemeModule& Ep, const ThemeModule& E, int M);

}  // namespace theme_lab
