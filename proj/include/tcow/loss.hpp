#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tcow/baselines.hpp"
#include "tcow/label.hpp"
#include "tcow/plane.hpp"

namespace tcow {

enum class JaccardSurrogate {
  min_max,  // 1 - Σ min(p, g) / Σ max(p, g)
  product,  // 1 - Σ p g / Σ (p + g - p g)
};

struct LossConfig {
  double lambda_bce = 0.2;
  double lambda_bootstrap = 0.4;
  double lambda_jaccard = 0.4;
  double lambda_target = 1.0;
  double lambda_occluder = 0.5;
  double lambda_container = 0.5;
  double beta = 5.0;     // occlusion emphasis on the target channel
  double alpha = 0.02;   // weight of occluder/container frames without that object
  double bootstrap_k = 1.0;
  double epsilon = 1e-7;
  JaccardSurrogate jaccard = JaccardSurrogate::min_max;

  bool operator==(const LossConfig&) const = default;
};

/// Throws std::invalid_argument when a weight is negative or k/alpha/epsilon
/// are out of range.
void validate(const LossConfig& config);

nlohmann::json to_json(const LossConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
LossConfig loss_config_from_json(const nlohmann::json& j);
LossConfig read_loss_config(const std::filesystem::path& path);

/// Sum in a fixed pairwise order, independent of thread count.
double pairwise_sum(std::span<const double> values);

/// Mean binary cross-entropy over pixels (predictions clamped to
/// [eps, 1 - eps]), times `weight`.
double bce(const SoftPlane& pred, const BitPlane& gt, double weight = 1.0, double eps = 1e-7);

/// 1 + (beta - 1) o. An undefined occlusion fraction counts as 0.
double occlusion_weight(std::optional<double> occlusion, double beta);

/// Mean of the ceil(k P) largest per-pixel cross-entropy terms, times `weight`.
double bootstrapped_bce(const SoftPlane& pred, const BitPlane& gt, double k, double weight = 1.0,
                        double eps = 1e-7);

/// Zero when both masks are identically zero.
double soft_jaccard(const SoftPlane& pred, const BitPlane& gt,
                    JaccardSurrogate surrogate = JaccardSurrogate::min_max);

/// Per-channel terms, each already averaged over frames.
struct ChannelLoss {
  double bce = 0.0;
  double bootstrapped = 0.0;
  double jaccard = 0.0;
  double total = 0.0;  // lambda_bce bce + lambda_bootstrap bootstrapped + lambda_jaccard jaccard
};

enum class Channel { target, occluder, container };

/// Target channel: both cross-entropy terms are scaled by
/// occlusion_weight(o_t). Occluder/container channels: every term of a
/// frame is scaled by 1 when that object exists and by alpha otherwise.
ChannelLoss channel_loss(std::span<const SoftPlane> pred, std::span<const BitPlane> gt,
                         std::span<const std::optional<double>> occlusion, std::span<const std::uint8_t> present,
                         Channel channel, const LossConfig& config);

struct LossBreakdown {
  ChannelLoss target;
  ChannelLoss occluder;
  ChannelLoss container;
  double total = 0.0;
};

LossBreakdown total_loss(const PredictionTriplet& pred, const AnnotationTriplet& gt,
                         std::span<const FrameLabel> labels, const LossConfig& config);

nlohmann::json to_json(const LossBreakdown& breakdown);

/// Bootstrap fraction over training: 1 -> 0.15 linearly during the first
/// 10% of progress, then constant.
double bootstrap_schedule(double progress);

}  // namespace tcow
