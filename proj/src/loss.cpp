#include "tcow/loss.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "tcow/file_io.hpp"

namespace tcow {

using nlohmann::json;

namespace {

double clamp_prob(float p, double eps) { return std::clamp(static_cast<double>(p), eps, 1.0 - eps); }

std::vector<double> pixel_bce(const SoftPlane& pred, const BitPlane& gt, double eps) {
  require_same_shape(pred, gt, "bce");
  const auto p = pred.data();
  const auto g = gt.data();
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clamp_prob(p[i], eps);
    out[i] = g[i] ? -std::log(q) : -std::log(1.0 - q);
  }
  return out;
}

double pairwise_sum_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, n - half);
}

}  // namespace

void validate(const LossConfig& c) {
  for (double w : {c.lambda_bce, c.lambda_bootstrap, c.lambda_jaccard, c.lambda_target, c.lambda_occluder,
                   c.lambda_container, c.beta}) {
    if (!(w >= 0.0)) throw std::invalid_argument("loss config: weights must be non-negative");
  }
  if (!(c.bootstrap_k > 0.0 && c.bootstrap_k <= 1.0)) throw std::invalid_argument("loss config: need 0 < k <= 1");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw std::invalid_argument("loss config: need 0 <= alpha <= 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 0.5)) throw std::invalid_argument("loss config: need 0 < epsilon < 0.5");
}

json to_json(const LossConfig& c) {
  return {{"lambda_bce", c.lambda_bce},
          {"lambda_bootstrap", c.lambda_bootstrap},
          {"lambda_jaccard", c.lambda_jaccard},
          {"lambda_target", c.lambda_target},
          {"lambda_occluder", c.lambda_occluder},
          {"lambda_container", c.lambda_container},
          {"beta", c.beta},
          {"alpha", c.alpha},
          {"bootstrap_k", c.bootstrap_k},
          {"epsilon", c.epsilon},
          {"jaccard", c.jaccard == JaccardSurrogate::min_max ? "min_max" : "product"}};
}

LossConfig loss_config_from_json(const json& j) {
  if (!j.is_object()) throw DataError("loss config: expected an object");
  LossConfig c;
  const std::vector<std::pair<const char*, double*>> fields = {
      {"lambda_bce", &c.lambda_bce},         {"lambda_bootstrap", &c.lambda_bootstrap},
      {"lambda_jaccard", &c.lambda_jaccard}, {"lambda_target", &c.lambda_target},
      {"lambda_occluder", &c.lambda_occluder}, {"lambda_container", &c.lambda_container},
      {"beta", &c.beta},                     {"alpha", &c.alpha},
      {"bootstrap_k", &c.bootstrap_k},       {"epsilon", &c.epsilon}};
  try {
    std::set<std::string> known = {"jaccard"};
    for (const auto& [key, dst] : fields) {
      known.insert(key);
      if (j.contains(key)) *dst = j.at(key).get<double>();
    }
    for (const auto& item : j.items()) {
      if (!known.contains(item.key())) throw DataError("loss config: unknown key '" + item.key() + "'");
    }
    if (j.contains("jaccard")) {
      const auto name = j.at("jaccard").get<std::string>();
      if (name == "min_max") {
        c.jaccard = JaccardSurrogate::min_max;
      } else if (name == "product") {
        c.jaccard = JaccardSurrogate::product;
      } else {
        throw DataError("loss config: unknown jaccard surrogate '" + name + "'");
      }
    }
    validate(c);
  } catch (const json::exception& e) {
    throw DataError(std::string("loss config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return c;
}

LossConfig read_loss_config(const std::filesystem::path& path) {
  try {
    return loss_config_from_json(json::parse(read_file_text(path)));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

double pairwise_sum(std::span<const double> values) { return pairwise_sum_range(values.data(), values.size()); }

double bce(const SoftPlane& pred, const BitPlane& gt, double weight, double eps) {
  const std::vector<double> terms = pixel_bce(pred, gt, eps);
  if (terms.empty()) return 0.0;
  return weight * (pairwise_sum(terms) / static_cast<double>(terms.size()));
}

double occlusion_weight(std::optional<double> occlusion, double beta) {
  return 1.0 + (beta - 1.0) * occlusion.value_or(0.0);
}

double bootstrapped_bce(const SoftPlane& pred, const BitPlane& gt, double k, double weight, double eps) {
  if (!(k > 0.0 && k <= 1.0)) throw std::invalid_argument("bootstrapped_bce: need 0 < k <= 1");
  std::vector<double> terms = pixel_bce(pred, gt, eps);
  if (terms.empty()) return 0.0;
  if (k == 1.0) return weight * (pairwise_sum(terms) / static_cast<double>(terms.size()));
  const auto keep = std::min(terms.size(),
                             static_cast<std::size_t>(std::ceil(k * static_cast<double>(terms.size()))));
  std::partial_sort(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(keep), terms.end(),
                    std::greater<>());
  return weight * (pairwise_sum(std::span(terms.data(), keep)) / static_cast<double>(keep));
}

double soft_jaccard(const SoftPlane& pred, const BitPlane& gt, JaccardSurrogate surrogate) {
  require_same_shape(pred, gt, "soft_jaccard");
  const auto p = pred.data();
  const auto g = gt.data();
  std::vector<double> num(p.size());
  std::vector<double> den(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::clamp(static_cast<double>(p[i]), 0.0, 1.0);
    const double b = g[i] ? 1.0 : 0.0;
    if (surrogate == JaccardSurrogate::min_max) {
      num[i] = std::min(a, b);
      den[i] = std::max(a, b);
    } else {
      num[i] = a * b;
      den[i] = a + b - a * b;
    }
  }
  const double d = pairwise_sum(den);
  if (d == 0.0) return 0.0;
  return 1.0 - pairwise_sum(num) / d;
}

ChannelLoss channel_loss(std::span<const SoftPlane> pred, std::span<const BitPlane> gt,
                         std::span<const std::optional<double>> occlusion, std::span<const std::uint8_t> present,
                         Channel channel, const LossConfig& config) {
  validate(config);
  const std::size_t frames = gt.size();
  if (pred.size() != frames || occlusion.size() != frames || present.size() != frames || frames == 0) {
    throw std::invalid_argument("channel_loss: per-frame inputs differ in length");
  }
  std::vector<double> bce_terms(frames), boot_terms(frames), jac_terms(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    double ce_weight = 1.0;
    double jac_weight = 1.0;
    if (channel == Channel::target) {
      ce_weight = occlusion_weight(occlusion[t], config.beta);
    } else if (!present[t]) {
      ce_weight = config.alpha;
      jac_weight = config.alpha;
    }
    bce_terms[t] = bce(pred[t], gt[t], ce_weight, config.epsilon);
    boot_terms[t] = bootstrapped_bce(pred[t], gt[t], config.bootstrap_k, ce_weight, config.epsilon);
    jac_terms[t] = jac_weight * soft_jaccard(pred[t], gt[t], config.jaccard);
  }
  const double n = static_cast<double>(frames);
  ChannelLoss out;
  out.bce = pairwise_sum(bce_terms) / n;
  out.bootstrapped = pairwise_sum(boot_terms) / n;
  out.jaccard = pairwise_sum(jac_terms) / n;
  out.total = config.lambda_bce * out.bce + config.lambda_bootstrap * out.bootstrapped +
              config.lambda_jaccard * out.jaccard;
  return out;
}

LossBreakdown total_loss(const PredictionTriplet& pred, const AnnotationTriplet& gt,
                         std::span<const FrameLabel> labels, const LossConfig& config) {
  const int frames = gt.frames();
  if (pred.frames() != frames || static_cast<int>(labels.size()) != frames) {
    throw std::invalid_argument("total_loss: prediction, ground truth and labels differ in length");
  }
  std::vector<std::optional<double>> occlusion;
  std::vector<std::uint8_t> has_occluder, has_container;
  for (const FrameLabel& label : labels) {
    occlusion.push_back(label.occlusion_of(gt.target_id));
    has_occluder.push_back(label.occluder_of(gt.target_id).has_value());
    has_container.push_back(label.container_of(gt.target_id).has_value());
  }
  const std::vector<std::uint8_t> always(occlusion.size(), 1);

  LossBreakdown out;
  out.target = channel_loss(pred.target, gt.target, occlusion, always, Channel::target, config);
  out.occluder = channel_loss(pred.occluder, gt.occluder, occlusion, has_occluder, Channel::occluder, config);
  out.container = channel_loss(pred.container, gt.container, occlusion, has_container, Channel::container, config);
  out.total = config.lambda_target * out.target.total + config.lambda_occluder * out.occluder.total +
              config.lambda_container * out.container.total;
  return out;
}

json to_json(const LossBreakdown& b) {
  auto channel = [](const ChannelLoss& c) {
    return json{{"bce", c.bce}, {"bootstrapped", c.bootstrapped}, {"jaccard", c.jaccard}, {"total", c.total}};
  };
  return {{"target", channel(b.target)},
          {"occluder", channel(b.occluder)},
          {"container", channel(b.container)},
          {"total", b.total}};
}

double bootstrap_schedule(double progress) {
  if (!(progress >= 0.0 && progress <= 1.0)) throw std::invalid_argument("bootstrap_schedule: progress outside [0, 1]");
  if (progress >= 0.1) return 0.15;
  return 1.0 - 8.5 * progress;
}

}  // namespace tcow
