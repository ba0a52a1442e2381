#include "mbrep/diophantine.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mbrep/enumeration.hpp"
#include "mbrep/rng.hpp"

namespace mbrep {

namespace {

Int scaled_from_mpfr(mpfr_t x, unsigned frac_bits) {
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(x) + 8);
    mpfr_mul_2ui(t, x, frac_bits, MPFR_RNDN);
    Int z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return z;
}

Int log_ratio_at(std::uint64_t p, const Int& q, unsigned frac_bits, unsigned wp) {
    mpfr_t lp, lq, lam;
    mpfr_init2(lp, wp);
    mpfr_init2(lq, wp);
    mpfr_init2(lam, wp);
    mpfr_set_ui(lp, p, MPFR_RNDN);
    mpfr_log(lp, lp, MPFR_RNDN);
    mpfr_set_z(lq, q.get_mpz_t(), MPFR_RNDN);
    mpfr_log(lq, lq, MPFR_RNDN);
    mpfr_div(lam, lq, lp, MPFR_RNDN);
    Int m = scaled_from_mpfr(lam, frac_bits);
    mpfr_clear(lp);
    mpfr_clear(lq);
    mpfr_clear(lam);
    return m;
}

// Two working precisions must agree to within 2 ulp of the target scale.
Int certified_log_ratio(std::uint64_t p, const Int& q, unsigned frac_bits) {
    const Int a = log_ratio_at(p, q, frac_bits, frac_bits + 64);
    const Int b = log_ratio_at(p, q, frac_bits, frac_bits + 96);
    if (abs(a - b) > 2) {
        throw PrecisionError("log_ratio: certification failed at requested precision");
    }
    return b;
}

void require_policy(const PrecisionPolicy& policy, unsigned frac_bits,
                    std::uint64_t M) {
    unsigned need = 64;
    std::uint64_t m = M;
    while (m > 1) {
        need += 2;
        m >>= 1;
    }
    if (frac_bits < need || policy.mantissa_bits < need) {
        throw PrecisionError("precision policy: mantissa_bits must be >= 2 log2(M) + 64");
    }
}

// Relative clustering of ascending gap lengths: g joins the current cluster
// iff (g - prev) <= tol * g, with tol compared exactly as a rational.
std::vector<Int> cluster_ascending(const std::vector<Int>& sorted_gaps, double tol) {
    mpq_class tq;
    mpq_set_d(tq.get_mpq_t(), tol);
    std::vector<Int> out;
    for (const Int& g : sorted_gaps) {
        if (!out.empty()) {
            const Int diff = g - out.back();
            if (diff * tq.get_den() <= g * tq.get_num()) {
                out.back() = g;  // keep the largest member of the cluster
                continue;
            }
        }
        out.push_back(g);
    }
    return out;
}

double ratio_to_double(const Int& num, unsigned frac_bits) {
    // num / 2^frac_bits without overflowing double for wide mantissas.
    const long ex = static_cast<long>(bit_length(num));
    if (ex == 0) return 0.0;
    Int shifted = num;
    if (ex > 52) {
        shifted >>= static_cast<unsigned>(ex - 52);
    } else {
        shifted <<= static_cast<unsigned>(52 - ex);
    }
    return std::ldexp(mpz_get_d(shifted.get_mpz_t()),
                      static_cast<int>(ex - 52) - static_cast<int>(frac_bits));
}

// Point m of the sequence: frac(lambda * m) in fixed point, exactly.
Int lattice_point(const FixedReal& lambda, std::uint64_t m) {
    Int p = lambda.mantissa * Int(static_cast<unsigned long>(m));
    Int mod = Int(1) << lambda.frac_bits;
    return p % mod;
}

}  // namespace

double FixedReal::to_double() const { return ratio_to_double(mantissa, frac_bits); }

std::string FixedReal::to_decimal_string(std::size_t digits) const {
    Int ip = mantissa >> frac_bits;
    Int frac = mantissa - (ip << frac_bits);
    Int pow10(1);
    for (std::size_t i = 0; i < digits; ++i) pow10 *= 10;
    Int scaled = (frac * pow10) >> frac_bits;
    std::string f = scaled.get_str();
    if (f.size() < digits) f.insert(f.begin(), digits - f.size(), '0');
    return ip.get_str() + "." + f;
}

FixedReal log_ratio(std::uint64_t p, std::uint64_t q, const PrecisionPolicy& policy) {
    if (p <= 1 || q <= 1) throw ValidationError("log_ratio: p, q must be > 1");
    if (!is_mult_independent_set({p, q})) {
        throw ValidationError("log_ratio: p and q are multiplicatively dependent");
    }
    FixedReal r;
    r.frac_bits = policy.mantissa_bits;
    r.mantissa = certified_log_ratio(p, Int(static_cast<unsigned long>(q)), r.frac_bits);
    return r;
}

std::vector<Convergent> convergents(const FixedReal& lambda, std::size_t count) {
    // Exact interval around lambda; every CF step must be unambiguous on it.
    const Int one_shift = Int(1) << lambda.frac_bits;
    mpq_class lo(lambda.mantissa - 2, one_shift);
    mpq_class hi(lambda.mantissa + 2, one_shift);
    lo.canonicalize();
    hi.canonicalize();

    const mpq_class lambda_lo = lo;
    const mpq_class lambda_hi = hi;

    std::vector<Convergent> out;
    Int h_prev2(0), h_prev(1);  // p_{-2} = 0, p_{-1} = 1
    Int k_prev2(1), k_prev(0);  // q_{-2} = 1, q_{-1} = 0

    for (std::size_t i = 0; i < count; ++i) {
        Int a_lo, a_hi;
        mpz_fdiv_q(a_lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
        mpz_fdiv_q(a_hi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
        if (a_lo != a_hi) {
            throw PrecisionError("convergents: continued-fraction step " +
                                 std::to_string(i) + " not certifiable");
        }
        const Int a = a_lo;
        Int h = a * h_prev + h_prev2;
        Int k = a * k_prev + k_prev2;

        // Certify |lambda - h/k| < 1/k^2 against both endpoints of the
        // original interval.
        mpq_class approx(h, k);
        approx.canonicalize();
        mpq_class worst = std::max(abs(lambda_hi - approx), abs(approx - lambda_lo));
        mpq_class limit(Int(1), k * k);
        limit.canonicalize();
        if (!(worst < limit)) {
            throw PrecisionError("convergents: convergent " + std::to_string(i) +
                                 " failed the 1/b^2 certificate");
        }
        out.push_back(Convergent{h, k});

        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;

        if (i + 1 == count) break;

        // x <- 1 / (x - a), swapping endpoints.
        mpq_class lo_shift = lo - mpq_class(a);
        mpq_class hi_shift = hi - mpq_class(a);
        if (sgn(lo_shift) <= 0 || sgn(hi_shift) <= 0) {
            throw PrecisionError("convergents: interval collapsed after step " +
                                 std::to_string(i));
        }
        mpq_class new_lo = 1 / hi_shift;
        mpq_class new_hi = 1 / lo_shift;
        lo = new_lo;
        hi = new_hi;
    }
    return out;
}

FractionalPartSequence gap_stats(const FixedReal& lambda, std::uint64_t M,
                                 const PrecisionPolicy& policy) {
    if (M < 1) throw ValidationError("gap_stats: M must be >= 1");
    require_policy(policy, lambda.frac_bits, M);

    FractionalPartSequence seq;
    seq.lambda = lambda;
    seq.M = M;
    seq.frac_bits = lambda.frac_bits;

    seq.sorted_points.reserve(M);
    for (std::uint64_t m = 0; m < M; ++m) {
        seq.sorted_points.push_back(lattice_point(lambda, m));
    }
    std::sort(seq.sorted_points.begin(), seq.sorted_points.end());
    for (std::size_t i = 1; i < seq.sorted_points.size(); ++i) {
        if (seq.sorted_points[i] == seq.sorted_points[i - 1]) {
            throw PrecisionError("gap_stats: fractional parts collided at this precision");
        }
    }

    const Int full = Int(1) << lambda.frac_bits;
    seq.gaps.reserve(M);
    for (std::size_t i = 0; i + 1 < seq.sorted_points.size(); ++i) {
        seq.gaps.push_back(seq.sorted_points[i + 1] - seq.sorted_points[i]);
    }
    seq.gaps.push_back(full - seq.sorted_points.back() + seq.sorted_points.front());

    std::vector<Int> sorted_gaps = seq.gaps;
    std::sort(sorted_gaps.begin(), sorted_gaps.end());
    seq.clustered_gaps = cluster_ascending(sorted_gaps, policy.cluster_tolerance);
    seq.max_gap = sorted_gaps.back();
    return seq;
}

double FractionalPartSequence::max_gap_value() const {
    return ratio_to_double(max_gap, frac_bits);
}

void three_gap_sweep(
    const FixedReal& lambda, std::uint64_t M_max, const PrecisionPolicy& policy,
    const std::function<void(std::uint64_t, const std::vector<Int>&, const Int&)>& visit) {
    if (M_max < 1) throw ValidationError("three_gap_sweep: M_max must be >= 1");
    require_policy(policy, lambda.frac_bits, M_max);

    const Int full = Int(1) << lambda.frac_bits;
    auto circ = [&](const Int& a, const Int& b) {
        // distance a -> b going up, in (0, full]
        Int d = b - a;
        if (d <= 0) d += full;
        return d;
    };

    std::set<Int> points;
    std::multiset<Int> gaps;
    points.insert(Int(0));
    gaps.insert(full);

    auto report = [&](std::uint64_t M) {
        std::vector<Int> distinct;
        for (auto it = gaps.begin(); it != gaps.end(); it = gaps.upper_bound(*it)) {
            distinct.push_back(*it);
        }
        std::vector<Int> clustered = cluster_ascending(distinct, policy.cluster_tolerance);
        visit(M, clustered, *gaps.rbegin());
    };

    report(1);
    for (std::uint64_t m = 1; m < M_max; ++m) {
        Int p = lattice_point(lambda, m);
        auto [it, inserted] = points.insert(p);
        if (!inserted) {
            throw PrecisionError("three_gap_sweep: fractional parts collided");
        }
        auto succ = std::next(it);
        if (succ == points.end()) succ = points.begin();
        auto pred = (it == points.begin()) ? std::prev(points.end()) : std::prev(it);

        if (points.size() == 2) {
            // The single full-circle gap splits in two.
            gaps.clear();
            gaps.insert(circ(*it, *succ));
            gaps.insert(circ(*succ, *it));
        } else {
            auto old_gap = gaps.find(circ(*pred, *succ));
            if (old_gap == gaps.end()) {
                throw Error("three_gap_sweep: internal gap bookkeeping failure");
            }
            gaps.erase(old_gap);
            gaps.insert(circ(*pred, *it));
            gaps.insert(circ(*it, *succ));
        }
        report(m + 1);
    }
}

double star_discrepancy(const FixedReal& lambda, std::uint64_t M,
                        const PrecisionPolicy& policy) {
    FractionalPartSequence seq = gap_stats(lambda, M, policy);
    // D*(x_0..x_{M-1}) = max_i max{ (i+1)/M - x_i, x_i - i/M } over sorted points.
    mpq_class best(0);
    const Int full = Int(1) << seq.frac_bits;
    for (std::size_t i = 0; i < seq.sorted_points.size(); ++i) {
        mpq_class x(seq.sorted_points[i], full);
        x.canonicalize();
        mpq_class up = mpq_class(static_cast<unsigned long>(i + 1),
                                 static_cast<unsigned long>(M)) -
                       x;
        mpq_class down = x - mpq_class(static_cast<unsigned long>(i),
                                       static_cast<unsigned long>(M));
        best = std::max({best, up, down});
    }
    return best.get_d();
}

PowerProduct nearest_below_via_lattice(std::uint64_t p, std::uint64_t q, const Int& n,
                                       const PrecisionPolicy& policy) {
    if (n <= 1) throw ValidationError("nearest_below_via_lattice: n must be > 1");
    const FixedReal lambda = log_ratio(p, q, policy);  // validates the pair

    // n a power of p short-circuits to m = 0.
    {
        const std::uint32_t k = floor_log(p, n);
        if (pow_int(p, k) == n) {
            return PowerProduct{{k, 0}, pow_int(p, k)};
        }
    }

    // M = ceil(log_q n) >= 1.
    std::uint32_t M = floor_log(q, n);
    if (pow_int(q, M) != n) M += 1;
    if (M == 0) M = 1;
    require_policy(policy, lambda.frac_bits, M);

    // Fixed-point log_p n, certified at two precisions.
    const unsigned fb = lambda.frac_bits;
    const Int x_lo = log_ratio_at(p, n, fb, fb + 64);
    const Int x_hi = log_ratio_at(p, n, fb, fb + 96);
    if (abs(x_lo - x_hi) > 2) {
        throw PrecisionError("nearest_below_via_lattice: log_p n not certifiable");
    }
    const Int x = x_hi;
    const Int full = Int(1) << fb;
    const Int frac_x = x % full;

    std::uint32_t best_m = 0;
    Int best_diff = frac_x;  // m = 0 always qualifies (P_0 = 0)
    for (std::uint32_t m = 1; m < M; ++m) {
        const Int pm = lattice_point(lambda, m);
        if (pm <= frac_x) {
            Int diff = frac_x - pm;
            if (diff < best_diff) {
                best_diff = diff;
                best_m = m;
            }
        }
    }

    // l is recovered exactly for the chosen m: the largest power of p with
    // p^l q^m <= n.  This sidesteps fixed-point floor boundary cases.
    const Int qm = pow_int(q, best_m);
    if (qm > n) throw PrecisionError("nearest_below_via_lattice: q^m exceeds n");
    const std::uint32_t l = floor_log(p, n / qm);
    PowerProduct result{{l, best_m}, pow_int(p, l) * qm};
    if (result.value > n) {
        throw Error("nearest_below_via_lattice: internal bound violation");
    }
    return result;
}

LemmaFit fit_lemma_constants(std::uint64_t p, std::uint64_t q,
                             std::pair<std::uint64_t, std::uint64_t> fit_range,
                             std::pair<std::uint64_t, std::uint64_t> validation_range,
                             std::uint64_t samples, std::uint64_t seed) {
    if (fit_range.first < 2 || fit_range.first > fit_range.second) {
        throw ValidationError("fit_lemma_constants: bad fit range");
    }
    if (validation_range.first < fit_range.second ||
        validation_range.first >= validation_range.second) {
        throw ValidationError(
            "fit_lemma_constants: validation range must lie above the fit range");
    }
    if (samples < 1) throw ValidationError("fit_lemma_constants: samples must be >= 1");
    const BaseSystem system = BaseSystem::create({p, q}, {0, 1});

    auto deficiency = [&](std::uint64_t n) {
        const PowerProduct b = largest_leq(system, Int(static_cast<unsigned long>(n)));
        const double bd = mpz_get_d(b.value.get_mpz_t());
        const double nd = static_cast<double>(n);
        return std::log1p((nd - bd) / bd);
    };

    LemmaFit fit;
    fit.fit_range = fit_range;
    fit.validation_range = validation_range;
    fit.samples = samples;
    fit.seed = seed;

    constexpr double kGridStep = 0.05;
    constexpr int kGridSize = 10;  // kappa = 0.05 .. 0.50

    std::vector<double> c_of_kappa(kGridSize, 0.0);
    for (std::uint64_t n = fit_range.first; n <= fit_range.second; ++n) {
        const double delta = deficiency(n);
        if (delta <= 0.0) continue;
        const double logn = std::log(static_cast<double>(n));
        for (int g = 0; g < kGridSize; ++g) {
            const double kappa = kGridStep * (g + 1);
            c_of_kappa[g] = std::max(c_of_kappa[g], delta * std::pow(logn, kappa));
        }
    }

    // Validation points are sampled once and shared by every grid entry.
    Rng rng(seed);
    std::vector<std::pair<std::uint64_t, double>> val;
    val.reserve(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const std::uint64_t n =
            validation_range.first + 1 +
            rng.below(validation_range.second - validation_range.first);
        val.emplace_back(n, deficiency(n));
    }

    fit.grid.resize(kGridSize);
    for (int g = 0; g < kGridSize; ++g) {
        const double kappa = kGridStep * (g + 1);
        std::uint64_t violations = 0;
        for (const auto& [n, delta] : val) {
            const double bound =
                c_of_kappa[g] * std::pow(std::log(static_cast<double>(n)), -kappa);
            if (delta > bound) ++violations;
        }
        fit.grid[g] = LemmaFitGridPoint{kappa, c_of_kappa[g], violations};
    }

    for (int g = kGridSize - 1; g >= 0; --g) {
        if (fit.grid[g].violations == 0) {
            fit.accepted = true;
            fit.kappa = fit.grid[g].kappa;
            fit.C = fit.grid[g].C;
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& [n, delta] : val) {
                const double bound =
                    fit.C * std::pow(std::log(static_cast<double>(n)), -fit.kappa);
                worst = std::max(worst, delta - bound);
            }
            fit.max_violation = worst;
            break;
        }
    }
    return fit;
}

GapDecayTable gap_decay_table(std::uint64_t p, std::uint64_t q,
                              const std::vector<std::uint64_t>& M_list,
                              const PrecisionPolicy& policy) {
    if (M_list.empty()) throw ValidationError("gap_decay_table: empty M list");
    for (std::size_t i = 1; i < M_list.size(); ++i) {
        if (M_list[i] <= M_list[i - 1]) {
            throw ValidationError("gap_decay_table: M list must be ascending");
        }
    }
    const FixedReal lambda = log_ratio(p, q, policy);
    GapDecayTable table;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::uint64_t M : M_list) {
        FractionalPartSequence seq = gap_stats(lambda, M, policy);
        const double g = seq.max_gap_value();
        table.rows.push_back(GapDecayRow{M, g});
        const double x = std::log(static_cast<double>(M));
        const double y = std::log(g);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(M_list.size());
    const double denom = k * sxx - sx * sx;
    table.slope = (denom != 0.0) ? (k * sxy - sx * sy) / denom : 0.0;
    return table;
}

}  // namespace mbrep
