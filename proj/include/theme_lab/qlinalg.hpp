#pragma once

#include <map>
#include <vector>

#include "theme_lab/series.hpp"

namespace theme_lab {

/* Dense matrix over Q, row-major. */
struct QMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;

    QMatrix() = default;
    QMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}
    Rational& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Rational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

/* In-place reduced row echelon form; returns pivot columns in row order. */
std::vector<int> rref(QMatrix& m);
int rank(QMatrix m);
std::vector<std::vector<Rational>> nullspace(QMatrix m);

/* A linear form in free parameters t_0, t_1, ... (homogeneous). */
class LinForm {
public:
    LinForm() = default;
    static LinForm param(int index);

    bool is_zero() const { return terms_.empty(); }
    const std::map<int, Rational>& terms() const { return terms_; }
    Rational eval(const std::vector<Rational>& values) const;

    LinForm& operator+=(const LinForm& o);
    LinForm& operator-=(const LinForm& o);
    LinForm& operator*=(const Rational& s);
    friend LinForm operator+(LinForm x, const LinForm& y) { return x += y; }
    friend LinForm operator-(LinForm x, const LinForm& y) { return x -= y; }
    friend LinForm operator*(const Rational& s, LinForm x) { return x *= s; }

    void add_scaled(const LinForm& o, const Rational& s);

private:
    std::map<int, Rational> terms_;
};

/* Truncated series whose coefficients are linear forms in parameters. */
struct ParamSeries {
    std::vector<LinForm> c;

    explicit ParamSeries(int precision = 1) : c(static_cast<std::size_t>(precision)) {}
    int prec() const { return static_cast<int>(c.size()); }
    ParamSeries truncated(int precision) const;
    BSeries eval(const std::vector<Rational>& values) const;
};

ParamSeries operator*(const BSeries& s, const ParamSeries& x);
ParamSeries operator+(const ParamSeries& x, const ParamSeries& y);

}  // namespace theme_lab
