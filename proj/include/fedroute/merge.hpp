#pragma once

#include <span>
#include <vector>

#include "fedroute/policy.hpp"

namespace fedroute {

// Client update direction relative to the round's global parameters.
struct TaskVector {
    std::vector<double> data;
};

TaskVector task_vector(const ParamVector& client, const ParamVector& reference);

enum class TrimScope { global, per_tensor };

// Keeps the ceil(keep_percent/100 * len) entries of largest magnitude and
// zeroes the rest; ties at the threshold keep the lower index. per_tensor
// scope applies the rule within each named tensor instead.
TaskVector trim(const TaskVector& tau, double keep_percent);
TaskVector trim_per_tensor(const TaskVector& tau, double keep_percent,
                           const Layout& layout);

// Elementwise sign of the elementwise sum; sgn(0) = 0.
std::vector<int> sign_vote(std::span<const TaskVector> taus);

// Per dimension, mean over the clients whose sign matches the vote; zero
// when the vote is zero. Zero entries never count as agreeing members.
TaskVector disjoint_merge(std::span<const TaskVector> taus,
                          std::span<const int> gamma);

// trim -> sign vote -> disjoint merge -> add back scaled by lambda.
ParamVector ties_merge(const ParamVector& global, std::span<const ParamVector> clients,
                       double keep_percent, double lambda,
                       TrimScope scope = TrimScope::global);

// Weighted elementwise mean; weights are normalized internally.
ParamVector fed_avg(std::span<const ParamVector> clients,
                    std::span<const double> weights);

}  // namespace fedroute
