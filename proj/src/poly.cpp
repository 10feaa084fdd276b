#include "qsys/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qsys {

namespace {

// Align two sorted variable lists; returns merged list and, for each input
// list, the position of each of its variables in the merged list.
std::vector<std::string> merge_vars(const std::vector<std::string> &a, const std::vector<std::string> &b,
                                    std::vector<int> &pos_a, std::vector<int> &pos_b) {
    std::vector<std::string> merged;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
    auto positions = [&merged](const std::vector<std::string> &v) {
        std::vector<int> pos(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            pos[i] = int(std::lower_bound(merged.begin(), merged.end(), v[i]) - merged.begin());
        return pos;
    };
    pos_a = positions(a);
    pos_b = positions(b);
    return merged;
}

Polynomial::Exponents remap(const Polynomial::Exponents &e, const std::vector<int> &pos, std::size_t width) {
    Polynomial::Exponents out(width, 0);
    for (std::size_t i = 0; i < e.size(); ++i) out[pos[i]] = e[i];
    return out;
}

int grlex_cmp(const Polynomial::Exponents &a, const Polynomial::Exponents &b) {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db ? -1 : 1;
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

} // namespace

Polynomial Polynomial::constant(const Rational &c) {
    Polynomial p;
    if (!c.is_zero()) p.terms_[{}] = c;
    return p;
}

Polynomial Polynomial::variable(const std::string &name) {
    Polynomial p;
    p.vars_ = {name};
    p.terms_[{1}] = Rational(1);
    return p;
}

Polynomial Polynomial::term(const Rational &c, const std::vector<std::string> &vars, const Exponents &exps) {
    Polynomial p = constant(c);
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (exps[i] != 0) {
            Polynomial v = variable(vars[i]).pow(unsigned(exps[i]));
            p = p * v;
        }
    return p;
}

Rational Polynomial::constant_value() const {
    if (is_zero()) return Rational(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

bool Polynomial::uses(const std::string &var) const {
    return std::binary_search(vars_.begin(), vars_.end(), var);
}

int Polynomial::total_degree() const {
    int d = -1;
    for (const auto &[e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

int Polynomial::degree_in(const std::string &var) const {
    if (is_zero()) return -1;
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return 0;
    std::size_t idx = std::size_t(it - vars_.begin());
    int d = 0;
    for (const auto &[e, c] : terms_) d = std::max(d, e[idx]);
    return d;
}

void Polynomial::insert_term(const Exponents &e, const Rational &c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_[e] = c;
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Polynomial::trim() {
    if (vars_.empty()) return;
    std::vector<bool> used(vars_.size(), false);
    for (const auto &[e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
    std::vector<std::string> nv;
    std::vector<int> keep;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) {
            nv.push_back(vars_[i]);
            keep.push_back(int(i));
        }
    TermMap nt;
    for (const auto &[e, c] : terms_) {
        Exponents ne(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) ne[i] = e[keep[i]];
        nt[ne] = c;
    }
    vars_ = std::move(nv);
    terms_ = std::move(nt);
}

Polynomial operator+(const Polynomial &a, const Polynomial &b) {
    std::vector<int> pa, pb;
    Polynomial out;
    out.vars_ = merge_vars(a.vars_, b.vars_, pa, pb);
    for (const auto &[e, c] : a.terms_) out.insert_term(remap(e, pa, out.vars_.size()), c);
    for (const auto &[e, c] : b.terms_) out.insert_term(remap(e, pb, out.vars_.size()), c);
    out.trim();
    return out;
}

Polynomial operator-(const Polynomial &a, const Polynomial &b) { return a + (-b); }

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto &[e, c] : out.terms_) c = -c;
    return out;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<int> pa, pb;
    Polynomial out;
    out.vars_ = merge_vars(a.vars_, b.vars_, pa, pb);
    std::size_t w = out.vars_.size();
    for (const auto &[ea, ca] : a.terms_) {
        Polynomial::Exponents base = remap(ea, pa, w);
        for (const auto &[eb, cb] : b.terms_) {
            Polynomial::Exponents e = base;
            for (std::size_t i = 0; i < eb.size(); ++i) e[pb[i]] += eb[i];
            out.insert_term(e, ca * cb);
        }
    }
    out.trim();
    return out;
}

Polynomial operator*(const Polynomial &a, const Rational &c) {
    if (c.is_zero()) return {};
    Polynomial out = a;
    for (auto &[e, v] : out.terms_) v *= c;
    return out;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial acc = constant(Rational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

bool operator==(const Polynomial &a, const Polynomial &b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }

bool operator<(const Polynomial &a, const Polynomial &b) {
    if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == a.terms_.end() && ib != b.terms_.end();
}

Polynomial Polynomial::derivative(const std::string &var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return {};
    std::size_t idx = std::size_t(it - vars_.begin());
    Polynomial out;
    out.vars_ = vars_;
    for (const auto &[e, c] : terms_) {
        if (e[idx] == 0) continue;
        Exponents ne = e;
        ne[idx] -= 1;
        out.insert_term(ne, c * Rational(e[idx]));
    }
    out.trim();
    return out;
}

std::vector<Polynomial> Polynomial::coeffs_in(const std::string &var) const {
    int d = degree_in(var);
    if (d < 0) return {};
    std::vector<Polynomial> out(std::size_t(d) + 1);
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    bool present = it != vars_.end() && *it == var;
    std::size_t idx = present ? std::size_t(it - vars_.begin()) : 0;
    for (const auto &[e, c] : terms_) {
        int k = present ? e[idx] : 0;
        Exponents ne = e;
        if (present) ne[idx] = 0;
        Polynomial mono;
        mono.vars_ = vars_;
        mono.terms_[ne] = c;
        mono.trim();
        out[std::size_t(k)] = out[std::size_t(k)] + mono;
    }
    return out;
}

Polynomial Polynomial::from_coeffs_in(const std::string &var, const std::vector<Polynomial> &coeffs) {
    Polynomial out;
    Polynomial v = variable(var);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        out = out + coeffs[k] * v.pow(unsigned(k));
    return out;
}

Rational Polynomial::leading_coefficient() const {
    if (is_zero()) throw std::logic_error("leading_coefficient of zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
        if (grlex_cmp(it->first, best->first) > 0) best = it;
    return best->second;
}

Polynomial Polynomial::rename_var(const std::string &from, const std::string &to) const {
    if (!uses(from)) return *this;
    if (uses(to)) throw std::invalid_argument("rename collides with existing variable " + to);
    Polynomial out;
    for (const auto &[e, c] : terms_) {
        std::vector<std::string> vs = vars_;
        for (auto &v : vs)
            if (v == from) v = to;
        out = out + term(c, vs, e);
    }
    return out;
}

Polynomial Polynomial::subst(const std::string &var, const Polynomial &value) const {
    if (!uses(var)) return *this;
    auto coeffs = coeffs_in(var);
    // Horner in var
    Polynomial out;
    for (std::size_t k = coeffs.size(); k-- > 0;) out = out * value + coeffs[k];
    return out;
}

Rational Polynomial::eval(const std::map<std::string, Rational> &point) const {
    Rational acc(0);
    for (const auto &[e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = point.find(vars_[i]);
            if (it == point.end()) throw std::invalid_argument("eval missing value for variable " + vars_[i]);
            t *= it->second.pow(e[i]);
        }
        acc += t;
    }
    return acc;
}

GaussianRational Polynomial::eval(const std::map<std::string, GaussianRational> &point) const {
    GaussianRational acc;
    for (const auto &[e, c] : terms_) {
        GaussianRational t(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = point.find(vars_[i]);
            if (it == point.end()) throw std::invalid_argument("eval missing value for variable " + vars_[i]);
            for (int k = 0; k < e[i]; ++k) t = t * it->second;
        }
        acc = acc + t;
    }
    return acc;
}

std::complex<double> Polynomial::eval(const std::map<std::string, std::complex<double>> &point) const {
    std::complex<double> acc = 0.0;
    for (const auto &[e, c] : terms_) {
        std::complex<double> t = c.to_double();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = point.find(vars_[i]);
            if (it == point.end()) throw std::invalid_argument("eval missing value for variable " + vars_[i]);
            for (int k = 0; k < e[i]; ++k) t *= it->second;
        }
        acc += t;
    }
    return acc;
}

Rational Polynomial::integer_content() const {
    if (is_zero()) return Rational(1);
    Int num_gcd(0), den_lcm(1);
    for (const auto &[e, c] : terms_) {
        num_gcd = gcd(num_gcd, c.num());
        den_lcm = lcm(den_lcm, c.den());
    }
    return Rational(num_gcd, den_lcm);
}

Int Polynomial::max_integer_coefficient() const {
    if (is_zero()) return Int(0);
    // clear denominators only; the content is part of the representation
    Int den_lcm(1);
    for (const auto &[e, c] : terms_) den_lcm = lcm(den_lcm, c.den());
    Int best(0);
    for (const auto &[e, c] : terms_) {
        Int v = ::abs(c.num() * (den_lcm / c.den()));
        if (v > best) best = v;
    }
    return best;
}

std::string Polynomial::str() const {
    if (is_zero()) return "0";
    // print in descending graded-lex order
    std::vector<const std::pair<const Exponents, Rational> *> ts;
    for (const auto &t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [](const auto *a, const auto *b) { return grlex_cmp(a->first, b->first) > 0; });
    std::ostringstream os;
    bool first = true;
    for (const auto *t : ts) {
        const Rational &c = t->second;
        if (!first) os << (c.sign() < 0 ? " - " : " + ");
        else if (c.sign() < 0) os << "-";
        first = false;
        Rational a = c.abs();
        bool has_vars = std::any_of(t->first.begin(), t->first.end(), [](int e) { return e != 0; });
        if (a != Rational(1) || !has_vars) os << a.str();
        bool star = a != Rational(1) || !has_vars;
        for (std::size_t i = 0; i < t->first.size(); ++i) {
            if (t->first[i] == 0) continue;
            if (star) os << "*";
            star = true;
            os << vars_[i];
            if (t->first[i] != 1) os << "^" << t->first[i];
        }
    }
    return os.str();
}

std::optional<Polynomial> try_exact_div(const Polynomial &a, const Polynomial &b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.is_zero()) return Polynomial{};
    if (b.is_constant()) return a * b.constant_value().inverse();

    // single-divisor monomial division in graded-lex order; exact iff b | a
    Polynomial rem = a;
    Polynomial quot;
    auto leading = [](const Polynomial &p) {
        auto best = p.terms().begin();
        for (auto it = std::next(p.terms().begin()); it != p.terms().end(); ++it)
            if (grlex_cmp(it->first, best->first) > 0) best = it;
        return best;
    };
    while (!rem.is_zero()) {
        auto lr = leading(rem);
        auto lb = leading(b);
        // monomial divisibility over the union of variables
        std::map<std::string, int> er, eb;
        for (std::size_t i = 0; i < lr->first.size(); ++i)
            if (lr->first[i]) er[rem.vars()[i]] = lr->first[i];
        for (std::size_t i = 0; i < lb->first.size(); ++i)
            if (lb->first[i]) eb[b.vars()[i]] = lb->first[i];
        std::vector<std::string> mono_vars;
        Polynomial::Exponents mono_exps;
        for (const auto &[v, e] : eb) {
            auto it = er.find(v);
            if (it == er.end() || it->second < e) return std::nullopt;
        }
        for (const auto &[v, e] : er) {
            auto it = eb.find(v);
            int q = e - (it == eb.end() ? 0 : it->second);
            if (q != 0) {
                mono_vars.push_back(v);
                mono_exps.push_back(q);
            }
        }
        Polynomial t = Polynomial::term(lr->second / lb->second, mono_vars, mono_exps);
        quot = quot + t;
        rem = rem - t * b;
    }
    return quot;
}

Polynomial exact_div(const Polynomial &a, const Polynomial &b) {
    auto q = try_exact_div(a, b);
    if (!q) throw std::domain_error("inexact polynomial division");
    return *q;
}

} // namespace qsys
