#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(OSMODES_CLI_PATH) + " " + args + " 2>/tmp/osmodes_cli_err.txt";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help exits 0") {
    auto r = run("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("neutral-curve") != std::string::npos);
  }

  TEST_CASE("usage errors exit 1") {
    CHECK(run("").code == 1);
    CHECK(run("eigen --alpha 1").code == 1);
    CHECK(run("eigen --alpha -1 --reynolds 1e4").code == 1);
    CHECK(slurp("/tmp/osmodes_cli_err.txt").find("\"error\": \"InvalidArgument\"") != std::string::npos);
    CHECK(run("eigen --alpha 1 --reynolds 1e4 --format xml").code == 1);
  }

  TEST_CASE("solver failures exit 2 with an error record") {
    auto r = run("eigen --alpha 1 --reynolds 1e4 --c-re 0.9 --c-im 0");
    CHECK(r.code == 2);
    CHECK(slurp("/tmp/osmodes_cli_err.txt").find("\"error\"") != std::string::npos);
  }

  TEST_CASE("eigen JSON keys and number format") {
    auto r = run("eigen --alpha 1 --reynolds 1e4 --no-meta");
    REQUIRE(r.code == 0);
    for (const char* k : {"\"alpha\"", "\"R\"", "\"c_re\"", "\"c_im\"", "\"growth_rate\"", "\"residual\"", "\"iterations\""})
      CHECK(r.out.find(k) != std::string::npos);
    CHECK(r.out.find("\"c_re\": 2.37526488") != std::string::npos);
    CHECK(r.out.find("meta") == std::string::npos);
    auto m = run("eigen --alpha 1 --reynolds 1e4");
    CHECK(m.out.find("\"meta\"") != std::string::npos);
  }

  TEST_CASE("config file with command-line override") {
    {
      std::ofstream f("/tmp/osmodes_cli_test.cfg");
      f << "# test\nalpha = 0.9\nreynolds = 1e4\nformat = csv\nno-meta = true\n";
    }
    auto a = run("--config /tmp/osmodes_cli_test.cfg eigen");
    auto b = run("eigen --alpha 0.9 --reynolds 1e4 --format csv --no-meta");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto c = run("--config /tmp/osmodes_cli_test.cfg eigen --alpha 1");
    auto d = run("eigen --alpha 1 --reynolds 1e4 --format csv --no-meta");
    CHECK(c.out == d.out);
  }

  TEST_CASE("airy-table and output file") {
    auto r = run("airy-table --no-meta --out /tmp/osmodes_airy.csv");
    REQUIRE(r.code == 0);
    std::string s = slurp("/tmp/osmodes_airy.csv");
    CHECK(s.rfind("z_re,z_im,kind,order,value_re,value_im\n", 0) == 0);
    CHECK(s.find("Ci,2,") != std::string::npos);
  }

  TEST_CASE("modes and green-slice dumps") {
    auto r = run("modes --alpha 1 --reynolds 1e4 --points 5 --format csv --no-meta");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("record,mode,z,re_phi,im_phi,re_dphi,im_dphi,log_scale\n", 0) == 0);
    auto g = run("green-slice --alpha 1 --reynolds 1e4 --c-re 0.2375 --c-im 0.0037 --no-meta");
    REQUIRE(g.code == 0);
    CHECK(g.out.rfind("x_re,x_im,g_re,g_im\n", 0) == 0);
  }
}
