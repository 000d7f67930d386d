#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dendro {

// Möbius and Liouville values for 1..N from a linear sieve.
class SieveTable {
public:
    explicit SieveTable(std::int64_t N);

    std::int64_t bound() const { return N_; }
    int mu(std::int64_t n) const { return mu_[index(n)]; }
    int lambda(std::int64_t n) const { return lambda_[index(n)]; }
    // Raw arrays; entry 0 is unused and holds 0.
    std::span<const std::int8_t> mu_values() const { return mu_; }
    std::span<const std::int8_t> lambda_values() const { return lambda_; }

private:
    std::size_t index(std::int64_t n) const;

    std::int64_t N_;
    std::vector<std::int8_t> mu_;
    std::vector<std::int8_t> lambda_;
};

// Trial-division evaluation, for spot checks of the table.
int mobius_by_factorization(std::uint64_t n);
int liouville_by_factorization(std::uint64_t n);

// M(N) = sum of mu(n) for n <= N, in exact integers.
std::int64_t mertens(const SieveTable& table, std::int64_t N);

// Compensated (Neumaier) summation.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// x_n = preperiod[n-1] for n <= |preperiod|, then cycle repeated.
double eventually_periodic(std::span<const double> preperiod, std::span<const double> cycle, std::int64_t n);

struct EpAverage {
    std::vector<double> averages; // averages[N'-1] = (1/N') sum_{n<=N'} mu(n) x_n
    double final_value = 0.0;
    double tail_max = 0.0;        // max |average| over N' in (N/10, N]
};

EpAverage ep_average(const SieveTable& table, std::span<const double> preperiod, std::span<const double> cycle,
                     std::int64_t N);

// The same final average evaluated residue class by residue class:
// sum_r cycle[r] * (1/N) sum_{n in class r} mu(n), plus the preperiod part.
double ep_average_by_progression(const SieveTable& table, std::span<const double> preperiod,
                                 std::span<const double> cycle, std::int64_t N);

struct HoledAverage {
    double final_value = 0.0;
    double running_sup = 0.0; // sup over N' of |(1/N') sum_{n<=N'} w_n a_n|
    double max_excess = 0.0;  // sup over N' of |average| - (1/k + 1/N')
    double bound = 0.0;       // 1/k
};

// Entries of w and a correspond to n = 1, 2, ...; N = a.size(). The support
// of a must have gaps of at least k, and values must lie in [0, 1].
HoledAverage holed_average(std::span<const std::int8_t> w, std::span<const double> a, std::int64_t k);
// Same with w = mu from the table.
HoledAverage holed_average(const SieveTable& table, std::span<const double> a, std::int64_t k);

} // namespace dendro
