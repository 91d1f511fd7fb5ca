// SPDX-License-Identifier: Apache-2.0
#include "breuil/gf.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace breuil {

namespace {

using Poly = std::vector<int16_t>; // dense, little-endian, over GF(p)

int64_t mod_p(int64_t a, int64_t p) {
    int64_t r = a % p;
    return r < 0 ? r + p : r;
}

void poly_trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<int16_t>(mod_p(c[i + j] + int64_t(a[i]) * b[j], p));
    poly_trim(c);
    return c;
}

int64_t inv_mod_prime(int64_t a, int64_t p) {
    a = mod_p(a, p);
    int64_t r = 1, b = a, e = p - 2;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

Poly poly_rem(Poly a, const Poly& f, int64_t p) {
    poly_trim(a);
    const size_t df = f.size() - 1;
    const int64_t lead_inv = inv_mod_prime(f.back(), p);
    while (a.size() > df) {
        int64_t factor = a.back() * lead_inv % p;
        size_t shift = a.size() - 1 - df;
        if (factor != 0) {
            for (size_t i = 0; i <= df; ++i)
                a[shift + i] = static_cast<int16_t>(mod_p(a[shift + i] - factor * f[i], p));
        }
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

Poly poly_powmod(const Poly& base, int64_t exp, const Poly& f, int64_t p) {
    Poly result{1};
    Poly b = poly_rem(base, f, p);
    while (exp > 0) {
        if (exp & 1) result = poly_rem(poly_mul(result, b, p), f, p);
        b = poly_rem(poly_mul(b, b, p), f, p);
        exp >>= 1;
    }
    return result;
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        Poly r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// No irreducible factor of degree <= m/2 iff gcd(f, x^{p^j} - x) = 1 for all
// j <= m/2; for monic degree-m f this certifies irreducibility.
bool is_irreducible(const Poly& f, int64_t p) {
    const int m = static_cast<int>(f.size()) - 1;
    if (m < 1) return false;
    if (m == 1) return true;
    Poly xp{0, 1}; // running x^{p^j} mod f
    for (int j = 1; j <= m / 2; ++j) {
        xp = poly_powmod(xp, p, f, p);
        Poly diff = xp;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<int16_t>(mod_p(diff[1] - 1, p));
        poly_trim(diff);
        Poly g = poly_gcd(f, diff, p);
        if (!(g.size() == 1)) return false;
    }
    return true;
}

int64_t ipow(int64_t b, int64_t e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct FieldParamsFactory {
    static const FieldParams* build(int64_t p, Poly modulus) {
        static std::mutex mu;
        static std::map<std::pair<int64_t, Poly>, std::unique_ptr<FieldParams>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, modulus);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second.get();

        auto fp = std::make_unique<FieldParams>();
        fp->p = p;
        fp->m = static_cast<int>(modulus.size()) - 1;
        fp->modulus = modulus;
        fp->inv_table_.assign(static_cast<size_t>(p), 0);
        for (int64_t a = 1; a < p; ++a) {
            for (int64_t b = 1; b < p; ++b)
                if (a * b % p == 1) { fp->inv_table_[static_cast<size_t>(a)] = static_cast<int16_t>(b); break; }
        }
        // reduction rows: x^{m+t} mod modulus for t in [0, m-2]
        const int m = fp->m;
        Poly pw(static_cast<size_t>(m) + 1, 0);
        pw[static_cast<size_t>(m)] = 1;
        for (int t = 0; t <= m - 2; ++t) {
            Poly red = poly_rem(pw, modulus, p);
            red.resize(static_cast<size_t>(m), 0);
            std::array<int16_t, FieldParams::kMaxDegree> row{};
            for (int i = 0; i < m; ++i) row[static_cast<size_t>(i)] = red[static_cast<size_t>(i)];
            fp->red_rows_.push_back(row);
            pw.insert(pw.begin(), 0);
        }
        const FieldParams* out = fp.get();
        cache.emplace(std::move(key), std::move(fp));
        return out;
    }
};

const FieldParams* FieldParams::get(int64_t p, int m) {
    if (!is_prime(p)) throw InvalidParams("p = " + std::to_string(p) + " is not prime");
    if (m < 1 || m > kMaxDegree)
        throw InvalidParams("extension degree m = " + std::to_string(m) + " out of range [1," +
                            std::to_string(kMaxDegree) + "]");
    // scan coefficient tuples in little-endian base-p order
    const int64_t count = ipow(p, m);
    for (int64_t idx = 0; idx < count; ++idx) {
        Poly f(static_cast<size_t>(m) + 1, 0);
        int64_t v = idx;
        for (int i = 0; i < m; ++i) { f[static_cast<size_t>(i)] = static_cast<int16_t>(v % p); v /= p; }
        f[static_cast<size_t>(m)] = 1;
        if (is_irreducible(f, p)) return FieldParamsFactory::build(p, f);
    }
    throw InvalidParams("no irreducible polynomial found"); // unreachable
}

const FieldParams* FieldParams::get(int64_t p, const std::vector<int64_t>& modulus) {
    if (!is_prime(p)) throw InvalidParams("p = " + std::to_string(p) + " is not prime");
    if (modulus.size() < 2) throw InvalidParams("modulus must have degree >= 1");
    Poly f(modulus.size());
    for (size_t i = 0; i < modulus.size(); ++i) f[i] = static_cast<int16_t>(mod_p(modulus[i], p));
    if (f.back() != 1) throw InvalidParams("modulus must be monic");
    const int m = static_cast<int>(f.size()) - 1;
    if (m > kMaxDegree) throw InvalidParams("modulus degree exceeds supported maximum");
    if (!is_irreducible(f, p)) throw InvalidParams("modulus is reducible over GF(p)");
    return FieldParamsFactory::build(p, f);
}

int64_t FieldParams::card() const { return ipow(p, m); }

FieldElem::FieldElem(const FieldParams* k, int64_t scalar) : k_(k) {
    c_.fill(0);
    c_[0] = static_cast<int16_t>(mod_p(scalar, k->p));
}

FieldElem FieldElem::decode(const FieldParams* k, int64_t index) {
    FieldElem x(k);
    for (int i = 0; i < k->m; ++i) { x.c_[static_cast<size_t>(i)] = static_cast<int16_t>(index % k->p); index /= k->p; }
    return x;
}

FieldElem FieldElem::from_coeffs(const FieldParams* k, const std::vector<int64_t>& coeffs) {
    if (static_cast<int>(coeffs.size()) != k->m)
        throw InvalidParams("coefficient vector length " + std::to_string(coeffs.size()) +
                            " does not match field degree " + std::to_string(k->m));
    FieldElem x(k);
    for (int i = 0; i < k->m; ++i)
        x.c_[static_cast<size_t>(i)] = static_cast<int16_t>(mod_p(coeffs[static_cast<size_t>(i)], k->p));
    return x;
}

std::vector<int64_t> FieldElem::coeffs() const {
    std::vector<int64_t> v(static_cast<size_t>(k_->m));
    for (int i = 0; i < k_->m; ++i) v[static_cast<size_t>(i)] = c_[static_cast<size_t>(i)];
    return v;
}

int64_t FieldElem::encode() const {
    int64_t v = 0;
    for (int i = k_->m - 1; i >= 0; --i) v = v * k_->p + c_[static_cast<size_t>(i)];
    return v;
}

bool FieldElem::is_zero() const {
    for (int i = 0; i < k_->m; ++i)
        if (c_[static_cast<size_t>(i)] != 0) return false;
    return true;
}

bool FieldElem::is_one() const {
    if (c_[0] != 1) return false;
    for (int i = 1; i < k_->m; ++i)
        if (c_[static_cast<size_t>(i)] != 0) return false;
    return true;
}

bool FieldElem::in_prime_field() const {
    for (int i = 1; i < k_->m; ++i)
        if (c_[static_cast<size_t>(i)] != 0) return false;
    return true;
}

int64_t FieldElem::prime_value() const {
    if (!in_prime_field()) throw NotInSubfield("element does not lie in the prime subfield");
    return c_[0];
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    FieldElem r(k_);
    for (int i = 0; i < k_->m; ++i)
        r.c_[static_cast<size_t>(i)] =
            static_cast<int16_t>(mod_p(c_[static_cast<size_t>(i)] + o.c_[static_cast<size_t>(i)], k_->p));
    return r;
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    FieldElem r(k_);
    for (int i = 0; i < k_->m; ++i)
        r.c_[static_cast<size_t>(i)] =
            static_cast<int16_t>(mod_p(c_[static_cast<size_t>(i)] - o.c_[static_cast<size_t>(i)], k_->p));
    return r;
}

FieldElem FieldElem::operator-() const {
    FieldElem r(k_);
    for (int i = 0; i < k_->m; ++i)
        r.c_[static_cast<size_t>(i)] = static_cast<int16_t>(mod_p(-c_[static_cast<size_t>(i)], k_->p));
    return r;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    const int m = k_->m;
    const int64_t p = k_->p;
    std::array<int64_t, 2 * FieldParams::kMaxDegree> prod{};
    for (int i = 0; i < m; ++i) {
        if (c_[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < m; ++j)
            prod[static_cast<size_t>(i + j)] += int64_t(c_[static_cast<size_t>(i)]) * o.c_[static_cast<size_t>(j)];
    }
    // fold x^{m+t} using precomputed reduction rows
    const auto& rows = k_->reduction_rows();
    for (int t = 2 * m - 2; t >= m; --t) {
        int64_t v = prod[static_cast<size_t>(t)] % p;
        if (v == 0) continue;
        const auto& row = rows[static_cast<size_t>(t - m)];
        for (int i = 0; i < m; ++i) prod[static_cast<size_t>(i)] += v * row[static_cast<size_t>(i)];
        prod[static_cast<size_t>(t)] = 0;
    }
    FieldElem r(k_);
    for (int i = 0; i < m; ++i) r.c_[static_cast<size_t>(i)] = static_cast<int16_t>(mod_p(prod[static_cast<size_t>(i)], p));
    return r;
}

FieldElem FieldElem::pow(int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    FieldElem r = FieldElem::one(k_);
    FieldElem b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw InvalidParams("inverse of zero field element");
    return pow(k_->card() - 2);
}

bool FieldElem::operator==(const FieldElem& o) const {
    if (k_ != o.k_) return false;
    for (int i = 0; i < k_->m; ++i)
        if (c_[static_cast<size_t>(i)] != o.c_[static_cast<size_t>(i)]) return false;
    return true;
}

FieldElem FieldElem::frobenius(int64_t j) const {
    FieldElem r = *this;
    j %= k_->m; // Frobenius has order m on GF(p^m)
    if (j < 0) j += k_->m;
    for (int64_t s = 0; s < j; ++s) r = r.pow(k_->p);
    return r;
}

FieldElem FieldElem::scaled(int64_t n) const {
    FieldElem r(k_);
    int64_t v = mod_p(n, k_->p);
    for (int i = 0; i < k_->m; ++i)
        r.c_[static_cast<size_t>(i)] = static_cast<int16_t>(c_[static_cast<size_t>(i)] * v % k_->p);
    return r;
}

std::string FieldElem::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < k_->m; ++i) {
        if (i) os << ",";
        os << c_[static_cast<size_t>(i)];
    }
    os << "]";
    return os.str();
}

FieldElem frobenius_iter(const FieldElem& x, int64_t j) { return x.frobenius(j); }

FieldElem trace(const FieldElem& x, int64_t d) {
    if (d < 1) throw InvalidParams("trace degree must be positive");
    if (frobenius_iter(x, d) != x)
        throw NotInSubfield("element is not fixed by the degree-" + std::to_string(d) + " Frobenius");
    FieldElem acc = FieldElem::zero(x.field());
    FieldElem term = x;
    for (int64_t j = 0; j < d; ++j) {
        acc = acc + term;
        term = term.frobenius(1);
    }
    return acc;
}

std::vector<FieldElem> twisted_roots(const FieldParams* ambient, int64_t d, int parity) {
    if (d < 1) throw InvalidParams("degree d must be positive");
    if (ambient->m % (2 * d) != 0)
        throw AmbientTooSmall("ambient degree " + std::to_string(ambient->m) +
                              " does not contain GF(p^" + std::to_string(2 * d) + ")");
    const int64_t n = ambient->card();
    if (n > 2'000'000)
        throw AmbientTooSmall("ambient field too large for exhaustive root enumeration");
    const FieldElem sign = parity % 2 == 0 ? FieldElem::one(ambient) : -FieldElem::one(ambient);
    std::vector<FieldElem> roots;
    for (int64_t idx = 0; idx < n; ++idx) {
        FieldElem x = FieldElem::decode(ambient, idx);
        if (frobenius_iter(x, d) == sign * x) roots.push_back(x);
    }
    return roots;
}

std::vector<FieldElem> subfield_elements(const FieldParams* ambient, int64_t d) {
    if (d < 1 || ambient->m % d != 0)
        throw AmbientTooSmall("degree " + std::to_string(d) + " is not a divisor of the ambient degree");
    const int64_t n = ambient->card();
    if (n > 2'000'000)
        throw AmbientTooSmall("ambient field too large for exhaustive enumeration");
    std::vector<FieldElem> out;
    for (int64_t idx = 0; idx < n; ++idx) {
        FieldElem x = FieldElem::decode(ambient, idx);
        if (frobenius_iter(x, d) == x) out.push_back(x);
    }
    return out;
}

FieldElem find_epsilon(const FieldParams* ambient) {
    if (ambient->m % 2 != 0 && ambient->p != 2)
        throw AmbientTooSmall("ambient degree must be even to contain a (p-1)-th root of -1");
    const FieldElem minus_one = -FieldElem::one(ambient);
    const int64_t n = ambient->card();
    for (int64_t idx = 1; idx < n; ++idx) {
        FieldElem x = FieldElem::decode(ambient, idx);
        if (x.pow(ambient->p - 1) == minus_one) return x;
    }
    throw AmbientTooSmall("no (p-1)-th root of -1 in the ambient field");
}

const FieldParams* ambient_field(int64_t p, const std::vector<int64_t>& degrees) {
    int64_t M = 1;
    for (int64_t d : degrees)
        if (d > 0) M = std::lcm(M, d);
    return FieldParams::get(p, static_cast<int>(M));
}

} // namespace breuil
