#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("beyondgen_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, std::string* output = nullptr) {
  std::string cmd = std::string(BEYONDGEN_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  if (output) *output = out;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("bad flags exit with the usage code") {
  CHECK(run_cli("--definitely-not-a-flag") == 2);
  CHECK(run_cli("generate --class 1planar") == 2);          // missing --graph
  CHECK(run_cli("generate --class rac --graph K5") == 2);   // unknown class
  CHECK(run_cli("generate --class 1planar --graph Q5") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("generate, report and render work end to end") {
  TempDir tmp;
  std::string out;
  int rc = run_cli("generate --class 1planar --graph K3,4 --out " + tmp.path.string(), &out);
  CHECK(rc == 0);
  CHECK(out.find("3 non-isomorphic") != std::string::npos);
  CHECK(fs::exists(tmp.path / "1planar" / "K3,4" / "set.txt"));

  rc = run_cli("report --out " + tmp.path.string() + " --format delimited", &out);
  CHECK(rc == 0);
  CHECK(out.find("1planar\tK3,4\tmember\t3") != std::string::npos);

  fs::path svg = tmp.path / "k34.svg";
  rc = run_cli("render --in " + (tmp.path / "1planar" / "K3,4" / "set.txt").string() +
                   " --index 1 --out " + svg.string(),
               &out);
  CHECK(rc == 0);
  std::string content = read_file(svg);
  CHECK(content.find("<svg") != std::string::npos);
  CHECK(content.find("class=\"vertex\"") != std::string::npos);
}

TEST_CASE("check prints verdicts and writes certificates") {
  TempDir tmp;
  std::string out;
  fs::path cert = tmp.path / "cert.txt";
  int rc = run_cli("check --class 2planar --graph K7 --out " + tmp.path.string() +
                       " --cert " + cert.string(),
                   &out);
  CHECK(rc == 0);
  CHECK(out.find("Member") == 0);
  CHECK(read_file(cert).find("drawing 2planar K7") == 0);

  rc = run_cli("check --class 1planar --graph K7 --out " + tmp.path.string(), &out);
  CHECK(rc == 0);
  CHECK(out.find("NonMember") == 0);
}

TEST_CASE("count exits nonzero on mismatch and zero on agreement") {
  TempDir tmp;
  fs::path good = tmp.path / "good.csv";
  {
    std::ofstream f(good);
    f << "# class, graph, non_iso, general\n";
    f << "1planar,K4,2,8\n";
    f << "1planar,K5,1\n";
  }
  std::string out;
  CHECK(run_cli("count --expected " + good.string() + " --out " + tmp.path.string(), &out) == 0);
  CHECK(out.find("all rows match") != std::string::npos);

  fs::path bad = tmp.path / "bad.csv";
  {
    std::ofstream f(bad);
    f << "1planar,K4,3\n";
  }
  CHECK(run_cli("count --expected " + bad.string() + " --out " + tmp.path.string(), &out) == 1);
  CHECK(out.find("MISMATCH") != std::string::npos);
}

TEST_CASE("sample reports Member for easy instances") {
  TempDir tmp;
  std::string out;
  int rc = run_cli("sample --class 1planar --graph K2,3 --seed 3 --out " + tmp.path.string(),
                   &out);
  CHECK(rc == 0);
  CHECK(out.find("Member") == 0);
}

TEST_CASE("budget aborts exit with the checkpoint code") {
  TempDir tmp;
  std::string out;
  int rc = run_cli("generate --class 2planar --graph K6 --max-drawings 5 --out " +
                       tmp.path.string(),
                   &out);
  CHECK(rc == 3);
  CHECK(out.find("checkpoint") != std::string::npos);
}