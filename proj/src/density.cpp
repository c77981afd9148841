#include "triform/density.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "triform/errors.hpp"

namespace triform {

namespace {

// Integrand after t = e^u: e^u / u^3 on [log 2, log x].
long double integrand(long double u) { return std::exp(u) / (u * u * u); }

long double simpson(long double a, long double fa, long double fm, long double fb,
                    long double b) {
    return (b - a) / 6.0L * (fa + 4.0L * fm + fb);
}

long double adapt(long double a, long double fa, long double m, long double fm,
                  long double b, long double fb, long double whole, long double eps,
                  int depth) {
    if (depth <= 0) throw PrecisionError("li3: adaptive quadrature did not converge");
    const long double lm = 0.5L * (a + m);
    const long double rm = 0.5L * (m + b);
    const long double flm = integrand(lm);
    const long double frm = integrand(rm);
    const long double left = simpson(a, fa, flm, fm, m);
    const long double right = simpson(m, fm, frm, fb, b);
    const long double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0L * eps) return left + right + delta / 15.0L;
    return adapt(a, fa, lm, flm, m, fm, left, 0.5L * eps, depth - 1) +
           adapt(m, fm, rm, frm, b, fb, right, 0.5L * eps, depth - 1);
}

long double integrate(long double a, long double b, long double eps_abs) {
    const long double m = 0.5L * (a + b);
    const long double fa = integrand(a);
    const long double fm = integrand(m);
    const long double fb = integrand(b);
    return adapt(a, fa, m, fm, b, fb, simpson(a, fa, fm, fb, b), eps_abs, 64);
}

} // namespace

long double li3(long double x) {
    if (x < 2.0L) throw std::domain_error("li3: x must be >= 2");
    if (x == 2.0L) return 0.0L;
    const long double a = std::log(2.0L);
    const long double b = std::log(x);
    // crude magnitude for scaling the absolute tolerance
    const long double rough = (b - a) * (integrand(a) + integrand(b));
    const long double coarse = integrate(a, b, 1e-12L * rough);
    const long double fine = integrate(a, b, 1e-12L * rough / 32.0L);
    if (std::fabs(coarse - fine) > 1e-9L * std::fabs(fine))
        throw PrecisionError("li3: refinement disagreement above certified bound");
    return fine;
}

long double main_term(long double x, long double s_a) {
    if (x <= 1.0L) throw std::domain_error("main_term: x must be > 1");
    const long double lg = std::log(x);
    return 0.5L * s_a * x / (lg * lg * lg);
}

std::vector<CountRecord> build_table(std::span<const uint64_t> limits,
                                     std::span<const uint64_t> counts) {
    if (limits.size() != counts.size())
        throw std::invalid_argument("build_table: limits and counts must be aligned");
    std::vector<CountRecord> records;
    records.reserve(limits.size());
    uint64_t prev = 0;
    for (size_t i = 0; i < limits.size(); ++i) {
        if (limits[i] <= prev)
            throw std::invalid_argument("build_table: limits must be ascending");
        if (limits[i] < 3)
            throw std::invalid_argument("build_table: x must be >= 3 (both predictors positive)");
        prev = limits[i];
        const long double x = (long double)limits[i];
        const long double lg = std::log(x);
        CountRecord rec;
        rec.x = limits[i];
        rec.count_a = counts[i];
        rec.ratio_log3 = (long double)counts[i] * lg * lg * lg / x;
        rec.ratio_li3 = (long double)counts[i] / li3(x);
        records.push_back(rec);
    }
    return records;
}

std::string format_fixed2(long double v) {
    const bool neg = v < 0.0L;
    const long double scaled = std::floor(std::fabs(v) * 100.0L + 0.5L);
    const unsigned long long cents = (unsigned long long)scaled;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%llu.%02llu", neg ? "-" : "", cents / 100, cents % 100);
    return buf;
}

std::string table_csv(std::span<const CountRecord> records) {
    std::ostringstream out;
    out << "x,count_a,ratio_log3,ratio_li3\n";
    for (const auto& r : records)
        out << r.x << ',' << r.count_a << ',' << format_fixed2(r.ratio_log3) << ','
            << format_fixed2(r.ratio_li3) << '\n';
    return out.str();
}

std::string table_text(std::span<const CountRecord> records) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%16s %14s %12s %10s\n", "x", "count", "x/(log x)^3",
                  "Li3(x)");
    out << line;
    for (const auto& r : records) {
        std::snprintf(line, sizeof(line), "%16llu %14llu %12s %10s\n",
                      (unsigned long long)r.x, (unsigned long long)r.count_a,
                      format_fixed2(r.ratio_log3).c_str(), format_fixed2(r.ratio_li3).c_str());
        out << line;
    }
    return out.str();
}

} // namespace triform
