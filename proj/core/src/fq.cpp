#include "btq/fq.hpp"
#include "btq/errors.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace btq {

namespace {

// Modulus x^e + (tail), tail listed by ascending degree.
struct IrredEntry {
    int q;
    int p;
    int e;
    int tail[3];
};

// x^2+x+1 over F_2, x^3+x+1 over F_2, x^2+1 over F_3.
constexpr IrredEntry kIrred[] = {
    {4, 2, 2, {1, 1, 0}},
    {8, 2, 3, {1, 1, 0}},
    {9, 3, 2, {1, 0, 0}},
};

std::vector<int> to_digits(int code, int p, int e)
{
    std::vector<int> d(e);
    for (int i = 0; i < e; ++i) {
        d[i] = code % p;
        code /= p;
    }
    return d;
}

int from_digits(const std::vector<int>& d, int p)
{
    int code = 0;
    for (int i = int(d.size()) - 1; i >= 0; --i) code = code * p + d[i];
    return code;
}

} // namespace

FqCtx::FqCtx(int q) : q_(q)
{
    p_ = 0;
    e_ = 1;
    for (int c = 2; c <= q; ++c) {
        if (q % c == 0) {
            p_ = c;
            break;
        }
    }
    if (p_ == 0 || q < 2) throw ConfigError("F_q: q must be a prime power >= 2");
    int qq = p_;
    while (qq < q) {
        qq *= p_;
        ++e_;
    }
    if (qq != q) throw ConfigError("F_q: q is not a prime power");
    if (e_ > 3 || q > 9) throw ConfigError("F_q: supported sizes are 2,3,4,5,7,8,9");

    const int* tail = nullptr;
    if (e_ > 1) {
        for (const auto& ent : kIrred)
            if (ent.q == q) tail = ent.tail;
        if (!tail) throw ConfigError("F_q: no modulus table entry");
    }

    add_.assign(q * q, 0);
    mul_.assign(q * q, 0);
    neg_.assign(q, 0);
    for (int a = 0; a < q; ++a) {
        auto da = to_digits(a, p_, e_);
        std::vector<int> dn(e_);
        for (int i = 0; i < e_; ++i) dn[i] = (p_ - da[i]) % p_;
        neg_[a] = fq_t(from_digits(dn, p_));
        for (int b = 0; b < q; ++b) {
            auto db = to_digits(b, p_, e_);
            std::vector<int> ds(e_);
            for (int i = 0; i < e_; ++i) ds[i] = (da[i] + db[i]) % p_;
            add_[a * q + b] = fq_t(from_digits(ds, p_));

            // product modulo the defining polynomial
            std::vector<int> prod(2 * e_ - 1, 0);
            for (int i = 0; i < e_; ++i)
                for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
            for (int d = 2 * e_ - 2; d >= e_; --d) {
                int c = prod[d];
                if (c == 0) continue;
                prod[d] = 0;
                // x^e = -tail
                for (int i = 0; i < e_; ++i)
                    prod[d - e_ + i] = (prod[d - e_ + i] + c * (p_ - tail[i])) % p_;
            }
            prod.resize(e_);
            mul_[a * q + b] = fq_t(from_digits(prod, p_));
        }
    }
}

fq_t FqCtx::inv(fq_t a) const
{
    if (a == 0) throw Error("F_q: inverse of zero");
    for (int b = 1; b < q_; ++b)
        if (mul(a, fq_t(b)) == 1) return fq_t(b);
    throw Error("F_q: no inverse found (corrupt tables)");
}

fq_t FqCtx::from_int(long long v) const
{
    long long r = v % p_;
    if (r < 0) r += p_;
    return fq_t(r);
}

const FqCtx& fq_context(int q)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<FqCtx>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it == cache.end()) it = cache.emplace(q, std::make_unique<FqCtx>(q)).first;
    return *it->second;
}

} // namespace btq
