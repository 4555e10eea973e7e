#pragma once

#include <iosfwd>
#include <string>

namespace graphvar {

// Command implementations shared by the binary and the tests. Each returns
// the process exit code: 0 success, 1 usage or precondition failure,
// 2 hypotheses fail, 3 non-convergence, 4 verification failure.
struct CliOptions {
  bool rational = false;
  bool full = false;
  int starts = -1;  // < 0 keeps the config value
  int jobs = -1;
  long long seed = -1;
  // embedding command only
  bool brute_force = false;
  int m = 1;
  double s = 2.0;
  double r = 2.0;
};

int run_check_graph(const std::string& graph_path, std::ostream& out, std::ostream& err);

int run_check_hypotheses(const std::string& graph_path, const std::string& config_path,
                         const CliOptions& opts, std::ostream& out, std::ostream& err);

int run_solve(const std::string& mode, const std::string& graph_path,
              const std::string& config_path, const std::string& out_path,
              const CliOptions& opts, std::ostream& out, std::ostream& err);

int run_verify(const std::string& graph_path, const std::string& config_path,
               const std::string& solution_path, const CliOptions& opts,
               std::ostream& out, std::ostream& err);

int run_embedding(const std::string& graph_path, const CliOptions& opts,
                  std::ostream& out, std::ostream& err);

}  // namespace graphvar
