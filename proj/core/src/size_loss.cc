/* Copyright 2026 The segscore Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "segscore/size_loss.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "segscore/components.h"
#include "segscore/errors.h"

namespace segscore {
namespace {

void CheckSameShape(const ProbVolume& probs, const LabelMap& labels) {
  if (probs.width() != labels.width() || probs.height() != labels.height()) {
    throw DomainError(fmt::format("probabilities are {}x{} but labels are {}x{}",
                                  probs.width(), probs.height(), labels.width(),
                                  labels.height()));
  }
}

template <typename WeightOf>
double WeightedCrossEntropy(const ProbVolume& probs, const LabelMap& labels,
                            WeightOf weight_of) {
  CheckSameShape(probs, labels);
  double sum = 0.0;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels.IsIgnored(p)) continue;
    const ClassId c = labels[p];
    if (c >= probs.num_classes()) {
      throw DomainError(fmt::format("label {} at pixel {} has no probability "
                                    "channel ({} classes)",
                                    c, p, probs.num_classes()));
    }
    const double prob = probs.at(p, c);
    if (prob <= 0.0) {
      throw DomainError(fmt::format(
          "zero probability for labelled class {} at pixel {}", c, p));
    }
    sum += weight_of(p) * std::log(prob);
  }
  return -sum / static_cast<double>(labels.size());
}

}  // namespace

WeightMap ComputeWeightMap(const LabelMap& pseudo_mask, double tau,
                           Connectivity policy) {
  if (!(tau >= 1.0) || !std::isfinite(tau)) {
    throw DomainError(fmt::format("tau must be a finite value >= 1, got {}", tau));
  }
  const ComponentLabeling labeling = LabelComponents(pseudo_mask, policy);

  std::vector<std::int64_t> class_total(256, 0);
  for (std::size_t k = 0; k < labeling.num_components(); ++k) {
    class_total[labeling.component_class[k]] += labeling.component_area[k];
  }
  std::vector<float> component_weight(labeling.num_components());
  for (std::size_t k = 0; k < labeling.num_components(); ++k) {
    const ClassId c = labeling.component_class[k];
    if (c == kBackground) {
      component_weight[k] = 1.0f;
      continue;
    }
    const double ratio = static_cast<double>(class_total[c]) /
                         static_cast<double>(labeling.component_area[k]);
    component_weight[k] = static_cast<float>(std::min(tau, ratio));
  }

  WeightMap out;
  out.width = pseudo_mask.width();
  out.height = pseudo_mask.height();
  out.tau = tau;
  out.weights.resize(pseudo_mask.size());
  for (std::size_t p = 0; p < pseudo_mask.size(); ++p) {
    const std::int32_t k = labeling.component[p];
    out.weights[p] = k < 0 ? 0.0f : component_weight[k];
  }
  return out;
}

ProbVolume::ProbVolume(int width, int height, int num_classes,
                       std::vector<double> data)
    : width_(width),
      height_(height),
      num_classes_(num_classes),
      data_(std::move(data)) {
  if (width < 1 || height < 1 || num_classes < 1) {
    throw DomainError(fmt::format("invalid probability volume {}x{}x{}", width,
                                  height, num_classes));
  }
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  if (data_.size() != pixels * num_classes) {
    throw DomainError(fmt::format("probability volume needs {} values, got {}",
                                  pixels * num_classes, data_.size()));
  }
  for (std::size_t p = 0; p < pixels; ++p) {
    double sum = 0.0;
    for (int c = 0; c < num_classes; ++c) {
      const double v = at(p, c);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(fmt::format(
            "probability {} of class {} at pixel {} is outside [0, 1]", v, c, p));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw DomainError(
          fmt::format("probabilities at pixel {} sum to {}, not 1", p, sum));
    }
  }
}

double SizeWeightedCrossEntropy(const ProbVolume& probs, const LabelMap& labels,
                                const WeightMap& weights) {
  if (weights.width != labels.width() || weights.height != labels.height()) {
    throw DomainError(fmt::format("weight map is {}x{} but labels are {}x{}",
                                  weights.width, weights.height, labels.width(),
                                  labels.height()));
  }
  return WeightedCrossEntropy(probs, labels, [&](std::size_t p) {
    return static_cast<double>(weights.weights[p]);
  });
}

double PixelCrossEntropy(const ProbVolume& probs, const LabelMap& labels) {
  return WeightedCrossEntropy(probs, labels, [](std::size_t) { return 1.0; });
}

FisherDiagonal ComputeFisherDiagonal(
    std::span<const ParamVector> gradient_samples) {
  if (gradient_samples.empty()) {
    throw DomainError("Fisher diagonal needs at least one gradient sample");
  }
  const std::size_t n = gradient_samples.front().size();
  FisherDiagonal out;
  out.values.assign(n, 0.0);
  for (std::size_t s = 0; s < gradient_samples.size(); ++s) {
    const ParamVector& g = gradient_samples[s];
    if (g.size() != n) {
      throw DomainError(fmt::format(
          "gradient sample {} has {} entries, expected {}", s, g.size(), n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double v = g.values[i];
      out.values[i] += v * v;
    }
  }
  const auto count = static_cast<double>(gradient_samples.size());
  for (double& v : out.values) v /= count;
  out.sample_count = static_cast<std::int64_t>(gradient_samples.size());
  return out;
}

FisherDiagonal MergeFisher(const FisherDiagonal& a, const FisherDiagonal& b) {
  if (a.values.size() != b.values.size()) {
    throw DomainError(fmt::format("cannot merge Fisher diagonals of length {} "
                                  "and {}",
                                  a.values.size(), b.values.size()));
  }
  if (a.sample_count < 0 || b.sample_count < 0 ||
      a.sample_count + b.sample_count == 0) {
    throw DomainError("Fisher merge needs a positive total sample count");
  }
  const auto na = static_cast<double>(a.sample_count);
  const auto nb = static_cast<double>(b.sample_count);
  FisherDiagonal out;
  out.sample_count = a.sample_count + b.sample_count;
  out.values.resize(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    out.values[i] = (na * a.values[i] + nb * b.values[i]) / (na + nb);
  }
  return out;
}

double EwcPenalty(const ParamVector& theta, const ParamVector& theta_star,
                  const FisherDiagonal& fisher, double lambda) {
  if (theta.size() != theta_star.size() ||
      theta.size() != fisher.values.size()) {
    throw DomainError(fmt::format(
        "EWC vectors differ in length: theta {}, theta* {}, Fisher {}",
        theta.size(), theta_star.size(), fisher.values.size()));
  }
  if (!(lambda >= 0.0)) {
    throw DomainError(fmt::format("lambda must be >= 0, got {}", lambda));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double delta = static_cast<double>(theta.values[i]) -
                         static_cast<double>(theta_star.values[i]);
    sum += fisher.values[i] * delta * delta;
  }
  return lambda / 2.0 * sum;
}

double SizeBalancedLoss(const ProbVolume& probs, const LabelMap& labels,
                        const WeightMap& weights, const ParamVector& theta,
                        const ParamVector& theta_star,
                        const FisherDiagonal& fisher, double lambda) {
  return SizeWeightedCrossEntropy(probs, labels, weights) +
         EwcPenalty(theta, theta_star, fisher, lambda);
}

}  // namespace segscore
