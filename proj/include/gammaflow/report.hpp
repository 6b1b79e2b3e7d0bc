#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gammaflow/graph.hpp"

namespace gammaflow {

enum class Status { pass, fail, inconclusive };

std::string_view to_string(Status s) noexcept;

struct Witness {
  std::optional<VertexIndex> vertex;
  std::optional<VertexFunction> function;
  std::optional<double> time;
};

/// Outcome of one numerical theorem check.  A failing report always
/// carries a witness that reproduces worst_residual when re-evaluated.
struct VerificationReport {
  std::string check_name;
  Status status = Status::pass;
  double worst_residual = 0.0;
  std::optional<Witness> witness;
  nlohmann::json parameters = nlohmann::json::object();

  bool passed() const noexcept { return status == Status::pass; }
};

nlohmann::json report_to_json(const WeightedGraph& g, const VerificationReport& r);

/// fail if any report failed, else inconclusive if any was, else pass.
Status aggregate_status(std::span<const VerificationReport> reports);

/// 0 pass, 1 fail, 2 inconclusive.
int exit_code(Status s) noexcept;

}  // namespace gammaflow
