#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "locc/tree/protocol_tree.hpp"

namespace locc::cli {

inline constexpr const char* kReportVersion = "locc-report/1";
inline constexpr const char* kToolVersion = "0.1.0";

struct Tolerances {
  double completeness = 1e-8;
  double equal = 1e-8;
  double null = 1e-11;
  double prob_cutoff = 1e-12;
  double recombination = 1e-7;
};

struct Report {
  nlohmann::json body;
  int exit_code = 0;
};

struct SlimArgs {
  std::optional<std::string> ensemble_path;
  std::uint64_t cap = 100000;
  std::optional<std::string> out;
  bool reduce_rand = false;
};

struct DemoArgs {
  std::string name;
  std::uint64_t seed = 7;
  std::size_t rounds = 2;
  std::vector<std::size_t> dims{2, 2};
};

Report cmd_validate(const std::string& tree_path, const Tolerances& tol = {});
Report cmd_evaluate(const std::string& tree_path, const std::string& ensemble_path, bool relabel,
                    const Tolerances& tol = {});
Report cmd_compress_m1(const std::string& tree_path, const std::string& ensemble_path,
                       const std::optional<std::string>& out, const Tolerances& tol = {});
Report cmd_slim(const std::string& tree_path, const SlimArgs& args, const Tolerances& tol = {});
Report cmd_demo(const DemoArgs& args, const Tolerances& tol = {});

/// FNV-1a (64-bit) of the bytes, as 16 hex digits.
std::string digest(const std::string& bytes);
/// max over internal vertices of ‖Σ K†K − I‖_F
double max_completeness_residual(const ProtocolTree& t);

/// Command-line entry point; returns the process exit status.
int run(int argc, char** argv);

}  // namespace locc::cli
