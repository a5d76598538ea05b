#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gwlab {

// Pairwise (cascade) summation: deterministic for a fixed element order and
// accurate to O(log n) rounding errors.
double pairwise_sum(std::span<const double> values);
double pairwise_mean(std::span<const double> values);

// Unbiased sample standard deviation.
double sample_stddev(std::span<const double> values, double mean);

struct LaplaceEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

// Empirical Laplace transform N^-1 sum exp(-lambda x_i) with its standard
// error.
LaplaceEstimate empirical_laplace(std::span<const double> samples, double lambda);

// Two-sample Kolmogorov-Smirnov distance sup |F1 - F2|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Total variation between two finite distributions given atom-by-atom.
double tv_discrete(std::span<const double> p, std::span<const double> q);

// Upper regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// p-value of a chi-square statistic with the given degrees of freedom.
double chi_square_pvalue(double stat, int dof);

}  // namespace gwlab
