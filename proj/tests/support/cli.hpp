#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace mnoswitch::testing {

inline const std::filesystem::path& cli_path() {
  static const std::filesystem::path p(MNOSWITCH_CLI);
  return p;
}

inline std::filesystem::path config_dir() { return MNOSWITCH_CONFIG_DIR; }

// Runs the CLI with `args`, discarding its output. Returns the exit status.
inline int run_cli(const std::string& args) {
  const std::string cmd = "\"" + cli_path().string() + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Fresh empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mnoswitch_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace mnoswitch::testing
