// Acceptance suite driver: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 only when all pass.

#include <cstdio>
#include <filesystem>

#include "ness/acceptance.hpp"

int main() {
  const std::filesystem::path out =
      std::filesystem::temp_directory_path() / "nesslab_acceptance";
  const auto results = ness::run_acceptance(1, out);
  const std::string table = ness::format_acceptance_table(results);
  std::fputs(table.c_str(), stdout);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  std::printf("%s (artifacts in %s)\n", all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED",
              out.string().c_str());
  return all ? 0 : 1;
}
