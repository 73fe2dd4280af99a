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

#ifndef SEGSCORE_SIZE_LOSS_H_
#define SEGSCORE_SIZE_LOSS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "segscore/label_map.h"

namespace segscore {

inline constexpr double kDefaultTau = 5.0;
inline constexpr double kDefaultLambda = 500.0;

// Per-pixel loss weights for one pseudo mask. Background pixels weigh 1,
// ignore pixels 0, and a foreground pixel in component n of class c weighs
// min(tau, total_area(c) / area(n)), so relatively small components are
// emphasised up to the clamp.
struct WeightMap {
  int width = 0;
  int height = 0;
  double tau = kDefaultTau;
  std::vector<float> weights;  // row-major

  float at(int x, int y) const {
    return weights[static_cast<std::size_t>(y) * width + x];
  }
};

// Throws DomainError if tau < 1 (or is not finite).
WeightMap ComputeWeightMap(const LabelMap& pseudo_mask, double tau,
                           Connectivity policy);

// Softmax output of a segmentation network for one image, pixel-major:
// probability of class c at pixel p is data[p * num_classes + c].
class ProbVolume {
 public:
  // Throws DomainError if a value lies outside [0, 1] or a pixel's
  // probabilities do not sum to 1 within 1e-6.
  ProbVolume(int width, int height, int num_classes, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int num_classes() const { return num_classes_; }
  double at(std::size_t pixel, int c) const {
    return data_[pixel * static_cast<std::size_t>(num_classes_) + c];
  }

 private:
  int width_;
  int height_;
  int num_classes_;
  std::vector<double> data_;
};

// -(1 / (H * W)) * sum over non-ignore pixels of w * log p[label].
// Ignore pixels add nothing but stay in the H * W normaliser.
double SizeWeightedCrossEntropy(const ProbVolume& probs, const LabelMap& labels,
                                const WeightMap& weights);

// Same normalisation with every weight equal to 1.
double PixelCrossEntropy(const ProbVolume& probs, const LabelMap& labels);

struct ParamVector {
  std::vector<float> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

struct FisherDiagonal {
  std::vector<double> values;
  std::int64_t sample_count = 0;
};

// Mean of squared per-sample gradients. Throws DomainError on empty or
// ragged input.
FisherDiagonal ComputeFisherDiagonal(std::span<const ParamVector> gradient_samples);

// Sample-count-weighted mean of two diagonals of equal length.
FisherDiagonal MergeFisher(const FisherDiagonal& a, const FisherDiagonal& b);

// sum_i (lambda / 2) * F_i * (theta_i - theta_star_i)^2.
double EwcPenalty(const ParamVector& theta, const ParamVector& theta_star,
                  const FisherDiagonal& fisher, double lambda);

// Size-weighted cross-entropy plus the EWC anchor to the parameters of the
// pixel-wise cross-entropy phase.
double SizeBalancedLoss(const ProbVolume& probs, const LabelMap& labels,
                        const WeightMap& weights, const ParamVector& theta,
                        const ParamVector& theta_star,
                        const FisherDiagonal& fisher, double lambda);

}  // namespace segscore

#endif  // SEGSCORE_SIZE_LOSS_H_
