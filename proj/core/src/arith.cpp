#include "dendro/arith.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dendro {

SieveTable::SieveTable(std::int64_t N) : N_(N) {
    if (N < 1) throw DomainError("sieve bound must be >= 1");
    if (N > 2'000'000'000) throw DomainError("sieve bound too large");
    const auto n = static_cast<std::size_t>(N);
    mu_.assign(n + 1, 0);
    lambda_.assign(n + 1, 0);
    std::vector<bool> composite(n + 1, false);
    std::vector<std::uint32_t> primes;
    mu_[1] = 1;
    lambda_[1] = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu_[i] = -1;
            lambda_[i] = -1;
        }
        for (std::uint32_t p : primes) {
            const std::size_t ip = i * p;
            if (ip > n) break;
            composite[ip] = true;
            lambda_[ip] = static_cast<std::int8_t>(-lambda_[i]);
            if (i % p == 0) {
                mu_[ip] = 0;
                break;
            }
            mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
        }
    }
}

std::size_t SieveTable::index(std::int64_t n) const {
    if (n < 1 || n > N_) throw DomainError("index " + std::to_string(n) + " outside sieve range [1, " + std::to_string(N_) + "]");
    return static_cast<std::size_t>(n);
}

namespace {

// (number of prime factors with multiplicity, squarefree?)
std::pair<int, bool> factor_shape(std::uint64_t n) {
    if (n == 0) throw DomainError("factorization of 0");
    int count = 0;
    bool squarefree = true;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        count += e;
        if (e > 1) squarefree = false;
    }
    if (n > 1) ++count;
    return {count, squarefree};
}

} // namespace

int mobius_by_factorization(std::uint64_t n) {
    const auto [count, squarefree] = factor_shape(n);
    return squarefree ? (count % 2 == 0 ? 1 : -1) : 0;
}

int liouville_by_factorization(std::uint64_t n) {
    return factor_shape(n).first % 2 == 0 ? 1 : -1;
}

std::int64_t mertens(const SieveTable& table, std::int64_t N) {
    if (N < 1 || N > table.bound()) {
        throw DomainError("mertens: N=" + std::to_string(N) + " outside [1, " + std::to_string(table.bound()) + "]");
    }
    std::int64_t m = 0;
    const auto mu = table.mu_values();
    for (std::int64_t n = 1; n <= N; ++n) m += mu[static_cast<std::size_t>(n)];
    return m;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

double eventually_periodic(std::span<const double> preperiod, std::span<const double> cycle, std::int64_t n) {
    const auto p0 = static_cast<std::int64_t>(preperiod.size());
    if (n <= p0) return preperiod[static_cast<std::size_t>(n - 1)];
    return cycle[static_cast<std::size_t>((n - 1 - p0) % static_cast<std::int64_t>(cycle.size()))];
}

EpAverage ep_average(const SieveTable& table, std::span<const double> preperiod, std::span<const double> cycle,
                     std::int64_t N) {
    if (cycle.empty()) throw DomainError("ep_average needs a nonempty cycle");
    if (N < 1 || N > table.bound()) throw DomainError("ep_average: N outside the sieve range");
    EpAverage out;
    out.averages.reserve(static_cast<std::size_t>(N));
    CompensatedSum s;
    const std::int64_t tail_start = N / 10;
    for (std::int64_t n = 1; n <= N; ++n) {
        const int m = table.mu(n);
        if (m != 0) s.add(m * eventually_periodic(preperiod, cycle, n));
        const double avg = s.value() / static_cast<double>(n);
        out.averages.push_back(avg);
        if (n > tail_start) out.tail_max = std::max(out.tail_max, std::abs(avg));
    }
    out.final_value = out.averages.back();
    return out;
}

double ep_average_by_progression(const SieveTable& table, std::span<const double> preperiod,
                                 std::span<const double> cycle, std::int64_t N) {
    if (cycle.empty()) throw DomainError("ep_average needs a nonempty cycle");
    if (N < 1 || N > table.bound()) throw DomainError("ep_average: N outside the sieve range");
    const auto p0 = static_cast<std::int64_t>(preperiod.size());
    const auto c = static_cast<std::int64_t>(cycle.size());
    CompensatedSum total;
    for (std::int64_t n = 1; n <= std::min(p0, N); ++n) total.add(table.mu(n) * preperiod[static_cast<std::size_t>(n - 1)]);
    for (std::int64_t r = 0; r < c; ++r) {
        std::int64_t class_sum = 0;
        for (std::int64_t n = p0 + 1 + r; n <= N; n += c) class_sum += table.mu(n);
        total.add(cycle[static_cast<std::size_t>(r)] * static_cast<double>(class_sum));
    }
    return total.value() / static_cast<double>(N);
}

HoledAverage holed_average(std::span<const std::int8_t> w, std::span<const double> a, std::int64_t k) {
    if (k < 1) throw DomainError("gap k must be >= 1");
    if (w.size() < a.size()) throw DomainError("weight sequence shorter than a");
    std::int64_t last = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] >= 0.0 && a[i] <= 1.0)) throw DomainError("a_" + std::to_string(i + 1) + " outside [0, 1]");
        if (a[i] == 0.0) continue;
        const auto n = static_cast<std::int64_t>(i + 1);
        if (last != 0 && n - last < k) {
            throw DomainError("gap condition violated by (n, m) = (" + std::to_string(last) + ", " + std::to_string(n) +
                              ")");
        }
        last = n;
    }
    HoledAverage out;
    out.bound = 1.0 / static_cast<double>(k);
    out.max_excess = -out.bound;
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (w[i] != 0 && a[i] != 0.0) s.add(w[i] * a[i]);
        const double n = static_cast<double>(i + 1);
        const double avg = std::abs(s.value() / n);
        out.running_sup = std::max(out.running_sup, avg);
        out.max_excess = std::max(out.max_excess, avg - (out.bound + 1.0 / n));
    }
    if (!a.empty()) out.final_value = s.value() / static_cast<double>(a.size());
    return out;
}

HoledAverage holed_average(const SieveTable& table, std::span<const double> a, std::int64_t k) {
    if (static_cast<std::int64_t>(a.size()) > table.bound()) throw DomainError("a longer than the sieve range");
    return holed_average(table.mu_values().subspan(1), a, k);
}

} // namespace dendro
