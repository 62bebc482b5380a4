#include "theme_lab/opalg.hpp"

#include <cctype>
#include <memory>

#include "theme_lab/errors.hpp"

namespace theme_lab {

/* ---------- OpNormal ---------- */

OpNormal OpNormal::gen_a(int t)
{
    OpNormal r(t);
    r.add_term(0, 1, 1);
    return r;
}

OpNormal OpNormal::gen_b(int t)
{
    OpNormal r(t);
    r.add_term(1, 0, 1);
    return r;
}

OpNormal OpNormal::scalar(const Rational& c, int t)
{
    OpNormal r(t);
    r.add_term(0, 0, c);
    return r;
}

OpNormal OpNormal::from_series(const BSeries& s, int t)
{
    OpNormal r(t);
    for (int i = 0; i < s.prec(); ++i) r.add_term(i, 0, s[i]);
    return r;
}

Rational OpNormal::coeff(int nu, int i) const
{
    auto it = terms_.find(nu);
    if (it == terms_.end() || i < 0 || static_cast<std::size_t>(i) >= it->second.size()) return 0;
    return it->second[static_cast<std::size_t>(i)];
}

void OpNormal::normalize_entry(int nu)
{
    auto it = terms_.find(nu);
    if (it == terms_.end()) return;
    auto& p = it->second;
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
    if (p.empty()) terms_.erase(it);
}

void OpNormal::add_term(int nu, int i, const Rational& c)
{
    if (nu >= trunc_ || sgn(c) == 0) return;
    auto& p = terms_[nu];
    if (p.size() <= static_cast<std::size_t>(i)) p.resize(static_cast<std::size_t>(i) + 1);
    p[static_cast<std::size_t>(i)] += c;
    normalize_entry(nu);
}

int OpNormal::a_degree() const
{
    int d = 0;
    for (const auto& kv : terms_) d = std::max(d, static_cast<int>(kv.second.size()) - 1);
    return d;
}

OpNormal OpNormal::operator+(const OpNormal& o) const
{
    OpNormal r(std::min(trunc_, o.trunc_));
    for (const auto* src : {this, &o})
        for (const auto& [nu, p] : src->terms_)
            for (std::size_t i = 0; i < p.size(); ++i) r.add_term(nu, static_cast<int>(i), p[i]);
    return r;
}

OpNormal OpNormal::operator-(const OpNormal& o) const { return *this + o.scaled(-1); }

OpNormal OpNormal::scaled(const Rational& s) const
{
    OpNormal r(trunc_);
    for (const auto& [nu, p] : terms_)
        for (std::size_t i = 0; i < p.size(); ++i) r.add_term(nu, static_cast<int>(i), p[i] * s);
    return r;
}

/* a * (b^mu a^j) = b^mu a^{j+1} + mu b^{mu+1} a^j */
OpNormal OpNormal::left_mul_a() const
{
    OpNormal r(trunc_);
    for (const auto& [mu, p] : terms_)
        for (std::size_t j = 0; j < p.size(); ++j) {
            r.add_term(mu, static_cast<int>(j) + 1, p[j]);
            r.add_term(mu + 1, static_cast<int>(j), mu * p[j]);
        }
    return r;
}

OpNormal OpNormal::operator*(const OpNormal& o) const
{
    int t = std::min(trunc_, o.trunc_);
    OpNormal right = o;
    right.trunc_ = t;
    std::vector<OpNormal> a_powers{right};
    OpNormal r(t);
    int deg = a_degree();
    for (int i = 1; i <= deg; ++i) a_powers.push_back(a_powers.back().left_mul_a());
    for (const auto& [nu, p] : terms_)
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (sgn(p[i]) == 0) continue;
            for (const auto& [mu, q] : a_powers[i].terms_)
                for (std::size_t j = 0; j < q.size(); ++j) r.add_term(nu + mu, static_cast<int>(j), p[i] * q[j]);
        }
    return r;
}

std::string OpNormal::to_string() const
{
    std::string out;
    for (const auto& [nu, p] : terms_)
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Rational& c = p[i];
            if (sgn(c) == 0) continue;
            std::string mono;
            if (nu > 0) mono = nu == 1 ? "b" : "b^" + std::to_string(nu);
            if (i > 0) {
                if (!mono.empty()) mono += "*";
                mono += i == 1 ? "a" : "a^" + std::to_string(i);
            }
            Rational mag = abs(c);
            out += out.empty() ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
            if (mono.empty())
                out += mag.get_str();
            else if (mag == 1)
                out += mono;
            else
                out += mag.get_str() + "*" + mono;
        }
    return out.empty() ? "0" : out;
}

/* ---------- FactorChain ---------- */

FactorChain FactorChain::suffix(int j) const
{
    FactorChain c;
    c.lambdas.assign(lambdas.begin() + j, lambdas.end());
    if (j < length()) c.units.assign(units.begin() + j, units.end());
    return c;
}

FactorChain FactorChain::prefix(int j) const
{
    FactorChain c;
    c.lambdas.assign(lambdas.begin(), lambdas.begin() + j);
    if (j > 0) c.units.assign(units.begin(), units.begin() + (j - 1));
    return c;
}

static std::string linear_factor(const Rational& l)
{
    if (sgn(l) == 0) return "a";
    std::string mag = l == 1 || l == -1 ? "" : Rational(abs(l)).get_str() + "*";
    return std::string("(a ") + (sgn(l) > 0 ? "- " : "+ ") + mag + "b)";
}

std::string FactorChain::to_string() const
{
    std::string out;
    for (int j = 0; j < length(); ++j) {
        if (j > 0) {
            const BSeries& s = units[static_cast<std::size_t>(j - 1)];
            if (s.to_string() != "1") out += "*inv(" + s.to_string() + ")";
            out += "*";
        }
        out += linear_factor(lambdas[static_cast<std::size_t>(j)]);
    }
    return out;
}

/* ---------- Bernstein ---------- */

BernsteinPoly poly_from_roots(const std::vector<Rational>& roots)
{
    BernsteinPoly p;
    p.roots = roots;
    p.coeffs = {1};
    for (const auto& r : roots) {
        std::vector<Rational> next(p.coeffs.size() + 1);
        for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
            next[i + 1] += p.coeffs[i];
            next[i] -= r * p.coeffs[i];
        }
        p.coeffs = std::move(next);
    }
    return p;
}

std::string BernsteinPoly::to_string() const
{
    std::string out;
    for (std::size_t n = coeffs.size(); n-- > 0;) {
        const Rational& c = coeffs[n];
        if (sgn(c) == 0) continue;
        std::string mono = n == 0 ? "" : (n == 1 ? "x" : "x^" + std::to_string(n));
        Rational mag = abs(c);
        out += out.empty() ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
        if (mono.empty())
            out += mag.get_str();
        else if (mag == 1)
            out += mono;
        else
            out += mag.get_str() + "*" + mono;
    }
    return out.empty() ? "0" : out;
}

std::string BernsteinPoly::factored() const
{
    if (roots.empty()) return "1";
    std::string out;
    for (const auto& r : roots) {
        if (sgn(r) == 0)
            out += "x";
        else
            out += std::string("(x ") + (sgn(r) > 0 ? "- " : "+ ") + Rational(abs(r)).get_str() + ")";
    }
    return out;
}

BernsteinData chain_bernstein(const FactorChain& chain)
{
    const int k = chain.length();
    OpNormal elem = OpNormal::scalar(1, k + 1);
    std::vector<Rational> roots;
    for (int j = 1; j <= k; ++j) {
        const Rational& l = chain.lambdas[static_cast<std::size_t>(j - 1)];
        elem = elem * (OpNormal::gen_a(k + 1) - OpNormal::gen_b(k + 1).scaled(l));
        Rational r = Rational(k) - l - j;
        r.canonicalize();
        roots.push_back(r);
    }
    return {elem, poly_from_roots(roots)};
}

/* ---------- parser ---------- */

namespace {

struct Node;
using NodePtr = std::unique_ptr<Node>;

struct Node {
    enum Kind { A, B, Num, Inv, Add, Sub, Mul, Neg, Pow } kind;
    Rational value;
    int exponent = 0;
    std::size_t pos = 0;
    NodePtr lhs, rhs;
};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse()
    {
        NodePtr e = expr();
        skip();
        if (i_ < s_.size()) throw SyntaxError(std::string("unexpected character '") + s_[i_] + "'", i_);
        return e;
    }

private:
    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool peek(char c)
    {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }
    static NodePtr make(Node::Kind k, std::size_t pos, NodePtr l = nullptr, NodePtr r = nullptr)
    {
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->pos = pos;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expr()
    {
        skip();
        std::size_t p = i_;
        NodePtr left;
        if (peek('-')) {
            ++i_;
            left = make(Node::Neg, p, term());
        } else {
            if (peek('+')) ++i_;
            left = term();
        }
        while (true) {
            skip();
            if (peek('+') || peek('-')) {
                char op = s_[i_];
                std::size_t q = i_++;
                left = make(op == '+' ? Node::Add : Node::Sub, q, std::move(left), term());
            } else {
                return left;
            }
        }
    }

    NodePtr term()
    {
        NodePtr left = power();
        while (peek('*')) {
            std::size_t q = i_++;
            left = make(Node::Mul, q, std::move(left), power());
        }
        return left;
    }

    NodePtr power()
    {
        NodePtr base = atom();
        if (peek('^')) {
            std::size_t q = i_++;
            skip();
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (st == i_) throw SyntaxError("expected a nonnegative integer exponent", st);
            auto n = make(Node::Pow, q, std::move(base));
            n->exponent = std::stoi(s_.substr(st, i_ - st));
            return n;
        }
        return base;
    }

    NodePtr atom()
    {
        skip();
        if (i_ >= s_.size()) throw SyntaxError("unexpected end of input", i_);
        std::size_t p = i_;
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            NodePtr e = expr();
            if (!peek(')')) throw SyntaxError("expected ')'", i_);
            ++i_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::string lit = s_.substr(p, i_ - p);
            if (i_ < s_.size() && s_[i_] == '/') {
                std::size_t d = ++i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                if (d == i_) throw SyntaxError("expected denominator digits", d);
                lit += "/" + s_.substr(d, i_ - d);
            }
            auto n = make(Node::Num, p);
            try {
                n->value = parse_rational(lit);
            } catch (const InputError&) {
                throw SyntaxError("invalid rational literal", p);
            }
            return n;
        }
        if (s_.compare(i_, 3, "inv") == 0) {
            i_ += 3;
            if (!peek('(')) throw SyntaxError("expected '(' after inv", i_);
            ++i_;
            NodePtr e = expr();
            if (!peek(')')) throw SyntaxError("expected ')'", i_);
            ++i_;
            return make(Node::Inv, p, std::move(e));
        }
        if (c == 'a' || c == 'b') {
            ++i_;
            if (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_])))
                throw SyntaxError("unknown identifier", p);
            return make(c == 'a' ? Node::A : Node::B, p);
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", p);
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

BSeries inv_argument(const Node& n, int t);

OpNormal eval(const Node& n, int t)
{
    switch (n.kind) {
    case Node::A: return OpNormal::gen_a(t);
    case Node::B: return OpNormal::gen_b(t);
    case Node::Num: return OpNormal::scalar(n.value, t);
    case Node::Inv: return OpNormal::from_series(inv_argument(n, t).invert_unit(), t);
    case Node::Add: return eval(*n.lhs, t) + eval(*n.rhs, t);
    case Node::Sub: return eval(*n.lhs, t) - eval(*n.rhs, t);
    case Node::Mul: return eval(*n.lhs, t) * eval(*n.rhs, t);
    case Node::Neg: return eval(*n.lhs, t).scaled(-1);
    case Node::Pow: {
        OpNormal base = eval(*n.lhs, t);
        OpNormal r = OpNormal::scalar(1, t);
        for (int i = 0; i < n.exponent; ++i) r = r * base;
        return r;
    }
    }
    return OpNormal(t);
}

/* The unit S inside inv(S), validated. */
BSeries inv_argument(const Node& n, int t)
{
    OpNormal arg = eval(*n.lhs, t);
    BSeries s(t);
    for (const auto& [nu, p] : arg.terms()) {
        if (p.size() > 1) throw SyntaxError("inv() argument must be a series in b", n.pos);
        if (!p.empty()) s.set(nu, p[0]);
    }
    if (s[0] != 1) throw NonUnitInverse("inv() argument has constant term " + s[0].get_str() + ", expected 1");
    return s;
}

void flatten_product(const Node& n, std::vector<const Node*>& out)
{
    if (n.kind == Node::Mul) {
        flatten_product(*n.lhs, out);
        flatten_product(*n.rhs, out);
    } else if (n.kind == Node::Pow && n.lhs->kind != Node::Inv) {
        for (int i = 0; i < n.exponent; ++i) flatten_product(*n.lhs, out);
    } else {
        out.push_back(&n);
    }
}

/* Recognizes a - l*b; returns false otherwise. */
bool as_linear(const Node& n, int t, Rational& lambda)
{
    if (n.kind == Node::Inv) return false;
    OpNormal e = eval(n, t);
    for (const auto& [nu, p] : e.terms()) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (sgn(p[i]) == 0) continue;
            bool ok = (nu == 0 && i == 1 && p[i] == 1) || (nu == 1 && i == 0);
            if (!ok) return false;
        }
    }
    if (e.coeff(0, 1) != 1) return false;
    lambda = -e.coeff(1, 0);
    return true;
}

}  // namespace

ParsedOperator parse_operator(const std::string& text, int t)
{
    Parser parser(text);
    NodePtr root = parser.parse();
    std::vector<const Node*> factors;
    flatten_product(*root, factors);

    /* Validate every inv() eagerly so errors surface regardless of shape. */
    for (const Node* f : factors)
        if (f->kind == Node::Inv) (void)inv_argument(*f, t);

    FactorChain chain;
    bool is_chain = !factors.empty();
    bool expect_linear = true;
    for (const Node* f : factors) {
        Rational l;
        if (f->kind == Node::Inv) {
            if (expect_linear || chain.lambdas.empty()) {
                is_chain = false;
                break;
            }
            chain.units.push_back(inv_argument(*f, t));
            expect_linear = true;
        } else if (as_linear(*f, t, l)) {
            if (!expect_linear) {
                /* two linear factors in a row: trivial unit between them */
                chain.units.push_back(BSeries::one(t));
            }
            chain.lambdas.push_back(l);
            expect_linear = false;
        } else {
            is_chain = false;
            break;
        }
    }
    if (is_chain && expect_linear) is_chain = false;
    if (is_chain) {
        for (const auto& l : chain.lambdas) {
            Rational d = l - chain.lambdas[0];
            if (d.get_den() != 1) is_chain = false;
        }
    }
    if (is_chain) return chain;
    return eval(*root, t);
}

OpNormal parse_normal(const std::string& text, int t)
{
    Parser parser(text);
    NodePtr root = parser.parse();
    return eval(*root, t);
}

OpNormal normalize(const std::string& text, int t) { return parse_normal(text, t); }

}  // namespace theme_lab
