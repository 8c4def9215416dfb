#include "jtvol/numeric.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace jtvol {

namespace {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

void accumulate(mpfr_ptr acc, const ExactScalar::Part& part, mpfr_ptr pi2, mpfr_ptr factor,
                mpfr_prec_t prec) {
    Mpfr term(prec), power(prec);
    for (const auto& [e, q] : part) {
        mpfr_set_q(term.get(), q.raw().get_mpq_t(), MPFR_RNDN);
        if (e != 0) {
            mpfr_pow_si(power.get(), pi2, e / 2, MPFR_RNDN);  // pi^e with e even
            mpfr_mul(term.get(), term.get(), power.get(), MPFR_RNDN);
        }
        if (factor != nullptr) mpfr_mul(term.get(), term.get(), factor, MPFR_RNDN);
        mpfr_add(acc, acc, term.get(), MPFR_RNDN);
    }
}

mpfr_prec_t prec_for(int digits) {
    if (digits < 15) throw std::invalid_argument("evaluate_numeric: precision must be >= 15 digits");
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873626)) + 32;
}

}  // namespace

double evaluate_numeric(const ExactScalar& x, int digits) {
    mpfr_prec_t prec = prec_for(digits);
    Mpfr pi(prec), pi2(prec), sqrt2(prec), acc(prec);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_sqr(pi2.get(), pi.get(), MPFR_RNDN);
    mpfr_sqrt_ui(sqrt2.get(), 2, MPFR_RNDN);
    mpfr_set_zero(acc.get(), 1);
    accumulate(acc.get(), x.rational_part(), pi2.get(), nullptr, prec);
    accumulate(acc.get(), x.sqrt2_part(), pi2.get(), sqrt2.get(), prec);
    return mpfr_get_d(acc.get(), MPFR_RNDN);
}

std::string evaluate_decimal(const ExactScalar& x, int digits) {
    mpfr_prec_t prec = prec_for(digits);
    Mpfr pi(prec), pi2(prec), sqrt2(prec), acc(prec);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_sqr(pi2.get(), pi.get(), MPFR_RNDN);
    mpfr_sqrt_ui(sqrt2.get(), 2, MPFR_RNDN);
    mpfr_set_zero(acc.get(), 1);
    accumulate(acc.get(), x.rational_part(), pi2.get(), nullptr, prec);
    accumulate(acc.get(), x.sqrt2_part(), pi2.get(), sqrt2.get(), prec);

    char* s = nullptr;
    if (mpfr_asprintf(&s, "%.*Rg", digits, acc.get()) < 0)
        throw std::runtime_error("evaluate_decimal: formatting failed");
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

}  // namespace jtvol
