#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace elsgd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A CSV table plus the metadata written to its JSON sidecar.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json column_docs = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  bool converged = true;
};

/// RFC-4180 style, LF line endings.
std::string to_csv(const Report& r);

/// Sidecar contents: command, library version, full config, column
/// definitions and scalar results.
nlohmann::json sidecar(const std::string& command, const Report& r);

/// Shortest decimal form of v that round-trips.
std::string fmt(double v);

/// Entry point shared by main() and the tests. Writes the CSV to `out`
/// unless --out is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elsgd::cli
