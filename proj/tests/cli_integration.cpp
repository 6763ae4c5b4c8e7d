// Drives the installed CLI binary end to end through /bin/sh. The binary path
// arrives in GRUSHIN_CLI_PATH (set by the test harness).

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

static int g_failures = 0;

#define CHECK(cond)                                                    \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::printf("[FAIL] %s:%d: %s\n", __FILE__, __LINE__, #cond);    \
      ++g_failures;                                                    \
    }                                                                  \
  } while (0)

#define REQUIRE(cond)                                                  \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::printf("[FAIL] %s:%d: %s (fatal)\n", __FILE__, __LINE__, #cond); \
      return 1;                                                        \
    }                                                                  \
  } while (0)

static std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

static bool contains(const std::string& hay, const char* needle) {
  return hay.find(needle) != std::string::npos;
}

// Runs `cmd` through the shell, returns the exit status (-1 if it did not
// exit normally).
static int run_shell(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
  if (st == -1 || !WIFEXITED(st)) return -1;
  return WEXITSTATUS(st);
}

static const char* kConfig =
    "[params]\n"
    "n = 2\n"
    "alpha = 1\n"
    "[surface]\n"
    "spec = radial-power:c=0.3,m=2\n"
    "domain = ball:1.25\n"
    "[suites]\n"
    "identities = true\n"
    "qsigma = true\n"
    "[sampling]\n"
    "points = 20\n"
    "directions = 6\n"
    "[qsigma]\n"
    "rmax = 0.8\n"
    "radii = 3\n"
    "[expect]\n"
    "qsigma = harmonic\n";

int main() {
  const char* cli = std::getenv("GRUSHIN_CLI_PATH");
  REQUIRE(cli != nullptr && *cli != '\0');
  REQUIRE(fs::exists(cli));
  const std::string bin = std::string("\"") + cli + "\"";

  const fs::path dir = fs::temp_directory_path() / "grushin-cli-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path conf = dir / "run.conf";
  std::ofstream(conf) << kConfig;
  const fs::path out_txt = dir / "stdout.txt";
  const fs::path err_txt = dir / "stderr.txt";
  const std::string capture =
      " > \"" + out_txt.string() + "\" 2> \"" + err_txt.string() + "\"";

  // usage surface
  CHECK(run_shell(bin + " --help" + capture) == 0);
  CHECK(contains(slurp(out_txt), "run"));
  CHECK(run_shell(bin + capture) == 2);                      // missing subcommand
  CHECK(run_shell(bin + " run" + capture) == 2);             // missing --config
  CHECK(run_shell(bin + " run --config x --bogus" + capture) == 2);

  // config errors are reported on stderr with exit 2
  CHECK(run_shell(bin + " run --config \"" + (dir / "missing.conf").string() + "\"" + capture) ==
        2);
  CHECK(contains(slurp(err_txt), "error:"));

  // a clean run: exit 0, JSON on stdout, report written under --out
  const fs::path run1 = dir / "run1";
  CHECK(run_shell(bin + " run --config \"" + conf.string() + "\" --out \"" + run1.string() +
                  "\"" + capture) == 0);
  const std::string json1 = slurp(run1 / "report.json");
  CHECK(!json1.empty());
  CHECK(slurp(out_txt) == json1);
  CHECK(contains(json1, "\"classification\": \"harmonic\""));
  CHECK(contains(json1, "\"identities\""));
  CHECK(!fs::exists(run1 / "profile.csv"));  // no profile/mvf suite -> no CSV

  // reruns are byte-identical, independent of the output directory
  const fs::path run2 = dir / "run2";
  CHECK(run_shell(bin + " run --config \"" + conf.string() + "\" --out \"" + run2.string() +
                  "\"" + capture) == 0);
  CHECK(slurp(run2 / "report.json") == json1);

  // --suite replaces the config's selection
  const fs::path run3 = dir / "run3";
  CHECK(run_shell(bin + " run --config \"" + conf.string() + "\" --suite identities --out \"" +
                  run3.string() + "\"" + capture) == 0);
  const std::string json3 = slurp(run3 / "report.json");
  CHECK(contains(json3, "\"identities\""));
  CHECK(!contains(json3, "\"qsigma\""));
  CHECK(run_shell(bin + " run --config \"" + conf.string() + "\" --suite everything" + capture) ==
        2);

  // a failed expectation exits 1 (distinct from usage/config errors)
  std::string wrong(kConfig);
  wrong.replace(wrong.find("= harmonic"), 10, "= superharmonic");
  const fs::path conf2 = dir / "wrong.conf";
  std::ofstream(conf2) << wrong;
  CHECK(run_shell(bin + " run --config \"" + conf2.string() + "\" --out \"" +
                  (dir / "run4").string() + "\"" + capture) == 1);

  fs::remove_all(dir);
  if (g_failures != 0) {
    std::printf("%d check(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all CLI checks passed\n");
  return 0;
}
