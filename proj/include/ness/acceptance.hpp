#ifndef NESS_ACCEPTANCE_HPP
#define NESS_ACCEPTANCE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ness {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Run the full acceptance suite with a fixed seed. Artifacts (summary JSON
/// and the printed table) are written under out_dir.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::filesystem::path& out_dir);

/// One line per criterion: "[PASS|FAIL] <id>. <name>: <detail>".
std::string format_acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace ness

#endif
