#include "gammaflow/report.hpp"

#include <cmath>

#include "gammaflow/graph_io.hpp"

namespace gammaflow {

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::json report_to_json(const WeightedGraph& g, const VerificationReport& r) {
  nlohmann::json out{{"check_name", r.check_name},
                     {"status", to_string(r.status)},
                     {"worst_residual", number_or_null(r.worst_residual)},
                     {"parameters", r.parameters}};
  if (r.witness) {
    nlohmann::json w = nlohmann::json::object();
    if (r.witness->vertex) w["vertex"] = g.id(*r.witness->vertex);
    if (r.witness->function) w["function"] = function_to_json(g, *r.witness->function);
    if (r.witness->time) w["time"] = *r.witness->time;
    out["witness"] = std::move(w);
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Status aggregate_status(std::span<const VerificationReport> reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.status == Status::fail) return Status::fail;
    if (r.status == Status::inconclusive) inconclusive = true;
  }
  return inconclusive ? Status::inconclusive : Status::pass;
}

int exit_code(Status s) noexcept {
  switch (s) {
    case Status::pass: return 0;
    case Status::fail: return 1;
    case Status::inconclusive: return 2;
  }
  return 1;
}

}  // namespace gammaflow
