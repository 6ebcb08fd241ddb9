#include "cyltree/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cyltree {

void Histogram::merge(const Histogram& other) {
    for (const auto& [value, count] : other.counts) counts[value] += count;
    total += other.total;
    replicas += other.replicas;
}

std::int64_t Histogram::max_value() const {
    if (counts.empty()) throw std::runtime_error("histogram is empty");
    return counts.rbegin()->first;
}

void Histogram::write_csv(std::ostream& os) const {
    os << "length,count\n";
    for (const auto& [value, count] : counts) os << value << "," << count << "\n";
}

Histogram Histogram::read_csv(std::istream& is) {
    Histogram h;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("length", 0) == 0) continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("histogram csv: malformed line '" + line + "'");
        h.add(std::stoll(line.substr(0, comma)),
              std::stoull(line.substr(comma + 1)));
    }
    return h;
}

ExpFit fit_exponential(
    const Histogram& h, std::uint64_t min_count,
    std::optional<std::pair<std::int64_t, std::int64_t>> fit_range) {
    std::int64_t lo = 1, hi = 0;
    if (fit_range) {
        lo = fit_range->first;
        hi = fit_range->second;
    } else {
        hi = std::numeric_limits<std::int64_t>::max();  // trimmed below
    }

    std::vector<std::pair<std::int64_t, double>> pts;  // (l, log count)
    for (const auto& [value, count] : h.counts) {
        if (value < lo || value > hi) continue;
        if (count < min_count) continue;
        pts.emplace_back(value, std::log(static_cast<double>(count)));
    }
    if (pts.size() < 3)
        throw std::runtime_error(
            "fit_exponential: fewer than 3 bins with count >= " +
            std::to_string(min_count) + " in the fit range");

    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) {
        sx += static_cast<double>(x);
        sy += y;
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : pts) {
        const double dx = static_cast<double>(x) - mx, dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0)
        throw std::runtime_error("fit_exponential: degenerate fit range");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    if (slope >= 0)
        throw std::runtime_error("fit_exponential: histogram does not decay");
    double ss_res = 0;
    for (const auto& [x, y] : pts) {
        const double r = y - (slope * static_cast<double>(x) + intercept);
        ss_res += r * r;
    }
    ExpFit fit;
    fit.A = std::exp(intercept);
    fit.lambda = -slope;
    fit.r_squared = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
    fit.fit_min = pts.front().first;
    fit.fit_max = pts.back().first;
    fit.bins_used = pts.size();
    return fit;
}

BoundConstants bound_constants(std::uint32_t n) {
    if (n < 3) throw std::invalid_argument("bound_constants: n must be >= 3");
    const double half = std::floor(n / 2.0);
    BoundConstants c;
    c.n = n;
    c.theta = std::pow(1.0 - std::pow(4.0, -half), 1.0 / half);
    c.C0 = std::max(1.0, std::pow(c.theta, -half));
    c.delta = std::pow(c.theta, 1.0 / (8.0 * n + 1.0));
    return c;
}

TailCurve empirical_tail(const Histogram& per_replica_values, bool strict) {
    if (per_replica_values.replicas == 0 ||
        per_replica_values.total != per_replica_values.replicas)
        throw std::invalid_argument(
            "empirical_tail: histogram must hold exactly one value per replica");
    const std::int64_t maxv = per_replica_values.max_value();
    if (maxv < 0)
        throw std::invalid_argument("empirical_tail: negative values");

    TailCurve tail;
    tail.replicas = per_replica_values.replicas;
    tail.strict = strict;
    tail.p.assign(static_cast<std::size_t>(maxv) + 2, 0.0);
    // Suffix sums: count of replicas with value >= l (or > l when strict).
    std::vector<std::uint64_t> ge(static_cast<std::size_t>(maxv) + 2, 0);
    for (const auto& [value, count] : per_replica_values.counts)
        ge[static_cast<std::size_t>(value)] += count;
    for (std::int64_t l = maxv - 1; l >= 0; --l)
        ge[static_cast<std::size_t>(l)] += ge[static_cast<std::size_t>(l) + 1];
    const double r = static_cast<double>(tail.replicas);
    for (std::size_t l = 0; l < tail.p.size(); ++l) {
        const std::size_t idx = strict ? l + 1 : l;
        tail.p[l] = idx < ge.size() ? static_cast<double>(ge[idx]) / r : 0.0;
    }
    return tail;
}

BoundReport bound_check(const TailCurve& tail, const BoundConstants& consts,
                        std::uint32_t m, BoundKind kind) {
    BoundReport report;
    report.kind = kind;
    if (kind == BoundKind::branch) {
        report.prefactor =
            consts.C0 * static_cast<double>(m) * (consts.n - 1.0);
        report.rate = consts.theta;
    } else {
        report.prefactor = consts.C0 / (1.0 - consts.theta);
        report.rate = consts.delta;
    }
    const double r = static_cast<double>(tail.replicas);
    for (std::size_t l = 0; l < tail.p.size(); ++l) {
        const double p = tail.p[l];
        const double bound =
            report.prefactor * std::pow(report.rate, static_cast<double>(l));
        const double se = std::sqrt(p * (1.0 - p) / r);
        ++report.checked;
        if (p > bound + 3.0 * se) {
            ++report.violations;
            if (report.first_violation < 0)
                report.first_violation = static_cast<std::int64_t>(l);
        }
    }
    report.ok = report.violations == 0;
    return report;
}

}  // namespace cyltree
