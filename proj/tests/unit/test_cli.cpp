#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QMCWAV_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("qmcwav_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("net generation and verification") {
  TempDir dir;
  REQUIRE(run("net gen --kind faure --b 3 --m 2 --s 2 --out " + (dir / "f.txt")).code == 0);
  const Run v = run("net verify --in " + (dir / "f.txt"));
  CHECK(v.code == 0);
  CHECK(v.out == "b=3 m=2 s=2 t=0 verified=yes\n");
  std::ofstream(dir / "dup.txt") << "2 2 1 4\n00\n00\n00\n00\n";
  const Run d = run("net verify --in " + (dir / "dup.txt") + " --t 0");
  CHECK(d.code == 1);
  CHECK(d.out.find("witness") != std::string::npos);
  const Run e = run("exactness --in " + (dir / "f.txt") + " --t 0");
  CHECK(e.code == 0);
  CHECK(e.out.rfind("L=2 exact=yes", 0) == 0);
}

TEST_CASE("exit codes") {
  TempDir dir;
  REQUIRE(run("net gen --kind vdc --b 2 --m 3 --out " + (dir / "v.txt")).code == 0);
  CHECK(run("--no-such-flag").code == 2);
  CHECK(run("wce --alpha 1").code == 2);
  CHECK(run("wce --in " + (dir / "v.txt") + " --alpha 0.5 --mode hilbert").code == 2);
  CHECK(run("wce --in " + (dir / "missing.txt") + " --alpha 1").code == 2);
  CHECK(run("net gen --kind faure --b 4 --m 2 --s 2 --out " + (dir / "x.txt")).code == 2);
  std::ofstream(dir / "bad.cfg") << "[experiment]\nm = 3\nbogus = 1\n";
  CHECK(run("run --config " + (dir / "bad.cfg")).code == 2);
  CHECK(run("discrepancy --in " + (dir / "v.txt") + " --alpha 0.75 --method quad --node-budget 4").code == 3);
  CHECK(run("--simd scalar wce --in " + (dir / "v.txt") + " --alpha 1").code == 0);
}

TEST_CASE("CSV values reproduce single-shot commands") {
  TempDir dir;
  std::ofstream(dir / "c.cfg") << "[experiment]\ngenerator = faure\nb = 2\ns = 2\nm = 2..3\nalpha = 0.75\n"
                                  "methods = upper, lower, hilbert, discrepancy\n";
  REQUIRE(run("run --config " + (dir / "c.cfg") + " --out " + (dir / "out.csv")).code == 0);
  std::ifstream csv(dir / "out.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "b,s,t,m,N,alpha,p,q,method,value,tail,seconds");
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto f = split(line, ',');
    REQUIRE(f.size() == 12);
    const std::string net = dir / ("f" + f[3] + ".txt");
    run("net gen --kind faure --b 2 --m " + f[3] + " --s 2 --out " + net);
    const std::string method = f[8];
    std::string single;
    if (method == "discrepancy") {
      single = split(trim(run("discrepancy --in " + net + " --alpha 0.75").out), ' ')[0];
    } else {
      const auto out = split(trim(run("wce --in " + net + " --alpha 0.75 --mode " + method).out), ' ');
      single = method == "upper" ? out[2] : out[0];
    }
    CHECK(single == f[9]);
    ++rows;
  }
  CHECK(rows == 8);
  CHECK(std::filesystem::exists(dir / "out.csv.fits.csv") == false);
}

TEST_CASE("discrepancy and sharpness output") {
  TempDir dir;
  run("net gen --kind faure --b 2 --m 3 --s 2 --out " + (dir / "f.txt"));
  const auto w = split(trim(run("discrepancy --in " + (dir / "f.txt") + " --alpha 0.75").out), ' ');
  REQUIRE(w.size() == 2);
  CHECK(std::stod(w[0]) == doctest::Approx(0.366980524603087).epsilon(1e-13));
  const auto s = split(trim(run("sharpness --in " + (dir / "f.txt") + " --alpha 0.75 --panels 16").out), ' ');
  REQUIRE(s.size() == 2);
  CHECK(std::stod(s[0]) <= 1.0);
  CHECK(std::stod(s[1]) == doctest::Approx(0.366980524603087).epsilon(1e-12));
}
