#include "theme_lab/qlinalg.hpp"

#include <algorithm>

namespace theme_lab {

std::vector<int> rref(QMatrix& m)
{
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int sel = -1;
        for (int i = row; i < m.rows; ++i)
            if (sgn(m(i, col)) != 0) { sel = i; break; }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m(sel, j), m(row, j));
        Rational inv = 1 / m(row, col);
        for (int j = col; j < m.cols; ++j) m(row, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || sgn(m(i, col)) == 0) continue;
            Rational f = m(i, col);
            for (int j = col; j < m.cols; ++j)
                if (sgn(m(row, j)) != 0) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(QMatrix m) { return static_cast<int>(rref(m).size()); }

std::vector<std::vector<Rational>> nullspace(QMatrix m)
{
    auto piv = rref(m);
    std::vector<char> is_piv(static_cast<std::size_t>(m.cols), 0);
    for (int c : piv) is_piv[static_cast<std::size_t>(c)] = 1;
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_piv[static_cast<std::size_t>(free)]) continue;
        std::vector<Rational> v(static_cast<std::size_t>(m.cols));
        v[static_cast<std::size_t>(free)] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[static_cast<std::size_t>(piv[r])] = -m(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

LinForm LinForm::param(int index)
{
    LinForm f;
    f.terms_[index] = 1;
    return f;
}

Rational LinForm::eval(const std::vector<Rational>& values) const
{
    Rational s = 0;
    for (const auto& [k, v] : terms_) s += v * values[static_cast<std::size_t>(k)];
    return s;
}

void LinForm::add_scaled(const LinForm& o, const Rational& s)
{
    if (sgn(s) == 0) return;
    for (const auto& [k, v] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, v * s);
        } else {
            it->second += v * s;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }
}

LinForm& LinForm::operator+=(const LinForm& o)
{
    add_scaled(o, 1);
    return *this;
}

LinForm& LinForm::operator-=(const LinForm& o)
{
    add_scaled(o, -1);
    return *this;
}

LinForm& LinForm::operator*=(const Rational& s)
{
    if (sgn(s) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& kv : terms_) kv.second *= s;
    return *this;
}

ParamSeries ParamSeries::truncated(int precision) const
{
    ParamSeries r(*this);
    r.c.resize(static_cast<std::size_t>(std::clamp(precision, 1, prec())));
    return r;
}

BSeries ParamSeries::eval(const std::vector<Rational>& values) const
{
    BSeries s(prec());
    for (int i = 0; i < prec(); ++i) s.set(i, c[static_cast<std::size_t>(i)].eval(values));
    return s;
}

ParamSeries operator*(const BSeries& s, const ParamSeries& x)
{
    int m = std::min(s.prec(), x.prec());
    ParamSeries r(m);
    for (int i = 0; i < m; ++i) {
        if (sgn(s[i]) == 0) continue;
        for (int j = 0; i + j < m; ++j)
            r.c[static_cast<std::size_t>(i + j)].add_scaled(x.c[static_cast<std::size_t>(j)], s[i]);
    }
    return r;
}

ParamSeries operator+(const ParamSeries& x, const ParamSeries& y)
{
    int m = std::min(x.prec(), y.prec());
    ParamSeries r(m);
    for (int i = 0; i < m; ++i) r.c[static_cast<std::size_t>(i)] = x.c[static_cast<std::size_t>(i)] + y.c[static_cast<std::size_t>(i)];
    return r;
}

}  // namespace theme_lab
