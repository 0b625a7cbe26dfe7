#include <cmath>
#include <limits>

#include "fitpa/errors.hpp"
#include "fitpa/estimator.hpp"
#include "json.hpp"

namespace fitpa {
namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string result_to_json(const EstimationResult& r, int indent) {
  json doc;
  json bins = json::array();
  for (std::size_t b = 0; b < r.binning.size(); ++b) {
    bins.push_back({{"bin_lo", r.binning.lo(b)},
                    {"bin_hi", r.binning.hi(b)},
                    {"value", number(r.A[b])},
                    {"sigma", number(r.A_sigma[b])},
                    {"selections", r.bin_selections[b]}});
  }
  doc["A"] = std::move(bins);
  json eta = json::array();
  for (const auto& f : r.eta) {
    eta.push_back({{"node_id", f.node}, {"label", f.label}, {"value", number(f.value)}, {"exposed", f.exposed}});
  }
  doc["eta"] = std::move(eta);
  doc["alpha"] = number(r.alpha);
  doc["alpha_stderr"] = number(r.alpha_stderr);
  json trace = json::array();
  for (double v : r.objective_trace) trace.push_back(number(v));
  doc["objective_trace"] = std::move(trace);
  doc["normalization_shift"] = number(r.normalization_shift);
  doc["converged"] = r.converged;
  doc["iterations"] = r.iterations;
  doc["sigma_fallback"] = r.sigma_fallback;
  doc["period"] = r.period ? json{{"start", r.period->start}, {"end", r.period->end}} : json(nullptr);
  doc["carry_degrees"] = r.carry_degrees;
  doc["config"] = {{"smoothing", r.config.smoothing},
                   {"fitness_shape", r.config.fitness_shape},
                   {"max_iterations", r.config.max_iterations},
                   {"tolerance", r.config.tolerance},
                   {"gradient_tolerance", r.config.gradient_tolerance},
                   {"per_degree_until", r.config.binning.per_degree_until},
                   {"log_base", r.config.binning.log_base},
                   {"estimate_fitness", r.config.estimate_fitness}};
  return doc.dump(indent);
}

EstimationResult result_from_json(const std::string& text) {
  EstimationResult r;
  try {
    const json doc = json::parse(text);
    std::vector<std::int64_t> lower;
    std::int64_t k_max = 0;
    for (const auto& b : doc.at("A")) {
      lower.push_back(b.at("bin_lo").get<std::int64_t>());
      k_max = b.at("bin_hi").get<std::int64_t>();
      r.A.push_back(number_or_nan(b.at("value")));
      r.A_sigma.push_back(number_or_nan(b.at("sigma")));
      r.bin_selections.push_back(b.value("selections", 0.0));
    }
    r.binning = DegreeBinning(std::move(lower), k_max);
    for (const auto& e : doc.at("eta")) {
      r.eta.push_back(NodeFitness{e.at("node_id").get<NodeId>(), e.value("label", std::string{}),
                                  number_or_nan(e.at("value")), e.at("exposed").get<bool>()});
    }
    r.alpha = number_or_nan(doc.at("alpha"));
    r.alpha_stderr = number_or_nan(doc.at("alpha_stderr"));
    for (const auto& v : doc.at("objective_trace")) r.objective_trace.push_back(number_or_nan(v));
    r.normalization_shift = number_or_nan(doc.value("normalization_shift", json(0.0)));
    r.converged = doc.at("converged").get<bool>();
    r.iterations = doc.value("iterations", 0);
    r.sigma_fallback = doc.value("sigma_fallback", false);
    if (doc.contains("period") && !doc["period"].is_null()) {
      r.period = TemporalNetwork::Window{doc["period"].at("start").get<Time>(), doc["period"].at("end").get<Time>()};
    }
    r.carry_degrees = doc.value("carry_degrees", true);
    if (doc.contains("config")) {
      const auto& c = doc["config"];
      r.config.smoothing = c.value("smoothing", r.config.smoothing);
      r.config.fitness_shape = c.value("fitness_shape", r.config.fitness_shape);
      r.config.max_iterations = c.value("max_iterations", r.config.max_iterations);
      r.config.tolerance = c.value("tolerance", r.config.tolerance);
      r.config.gradient_tolerance = c.value("gradient_tolerance", r.config.gradient_tolerance);
      r.config.binning.per_degree_until = c.value("per_degree_until", r.config.binning.per_degree_until);
      r.config.binning.log_base = c.value("log_base", r.config.binning.log_base);
      r.config.estimate_fitness = c.value("estimate_fitness", r.config.estimate_fitness);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid result document: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid result document: ") + e.what(), 0);
  }
  r.build_index();
  return r;
}

}  // namespace fitpa
