#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
  if (const char* p = std::getenv("UEA_CLI_PATH")) return p;
  for (const char* guess : {"./tools/uea", "build/tools/uea", "../tools/uea"}) {
    std::ifstream probe(guess);
    if (probe.good()) return guess;
  }
  return "uea";
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int rc = pclose(pipe);
  return {WEXITSTATUS(rc), out};
}

/// Data section: everything except trailing comment lines (wall time).
std::string data_section(const std::string& out) {
  std::string data;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# wall-time-ms", 0) != 0) data += line + "\n";
  return data;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("cli: documented center and lcs runs") {
  auto r = run_cli("center --catalog K6.3 --field Q --truncate 4");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "dim Z: 30"));

  auto l = run_cli("lcs --catalog L5.7 --field Q");
  CHECK(l.exit_code == 0);
  CHECK(contains(l.out, "series: (5, 3, 2, 1)"));
}

TEST_CASE("cli: exit codes 1 and 2") {
  std::ofstream("/tmp/uea_bad.lie") << "field Q\ndim 0\n";
  CHECK(run_cli("validate /tmp/uea_bad.lie").exit_code == 1);

  std::ofstream("/tmp/uea_jacobi.lie")
      << "field Q\ndim 3\n[1,2] = 1*e.3\n[1,3] = 1*e.1\n";
  auto v = run_cli("validate /tmp/uea_jacobi.lie");
  CHECK(v.exit_code == 1);
  CHECK(contains(v.out, "jacobi"));

  // equal invariants without --search is inconclusive: exit 2
  auto iso = run_cli("iso catalog:L5.6 catalog:L5.7 --field Q --truncate 5");
  CHECK(iso.exit_code == 2);
  CHECK(contains(iso.out, "Inconclusive"));

  CHECK(run_cli("center --catalog NO.SUCH --field Q --truncate 3").exit_code == 1);
}

TEST_CASE("cli: golden stability of the data section") {
  for (const char* cmd :
       {"screen --dim 5 --field Q --truncate 4",
        "fingerprint --catalog K6.9 --field \"GF(5)\" --truncate 4",
        "catalog show K6.24 --param 2 --field \"GF(3)\"",
        "iso catalog:K6.9 catalog:K6.24:1 --field \"GF(5)\" --truncate 4 --search"}) {
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.exit_code == b.exit_code);
    CHECK(data_section(a.out) == data_section(b.out));
  }
}

TEST_CASE("cli: machine mode emits key=value") {
  auto r = run_cli("lcs --catalog L5.3 --field Q --machine");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "series=(5, 2, 1)"));
  CHECK(contains(r.out, "class=4") == false);
  CHECK(contains(r.out, "class=3"));
}

TEST_CASE("cli: catalog show round trips through validate and env") {
  auto show = run_cli("catalog show L5.6 --field \"GF(2)\"");
  CHECK(show.exit_code == 0);
  std::ofstream("/tmp/uea_l56.lie") << data_section(show.out);
  auto v = run_cli("validate /tmp/uea_l56.lie");
  CHECK(v.exit_code == 0);
  CHECK(contains(v.out, "status: ok"));
  auto e = run_cli("env /tmp/uea_l56.lie --truncate 3 --table");
  CHECK(e.exit_code == 0);
  CHECK(contains(e.out, "layer-dims: 2 4"));
  CHECK(contains(e.out, "x1 * x2 = "));
}

TEST_CASE("cli: certificate verification from a map file") {
  std::ofstream("/tmp/uea_cert.map") << "e.3 -> 1*e.3 + 1*e.1^2\n";
  auto ok = run_cli("iso catalog:L5.3 catalog:L5.5 --field \"GF(2)\" --truncate 5 "
                    "--certificate /tmp/uea_cert.map");
  CHECK(ok.exit_code == 0);
  CHECK(contains(ok.out, "verdict: Isomorphic"));
  CHECK(contains(ok.out, "promoted: yes"));

  auto bad = run_cli("iso catalog:L5.3 catalog:L5.5 --field \"GF(5)\" --truncate 4 "
                     "--certificate /tmp/uea_cert.map");
  CHECK(bad.exit_code == 0);
  CHECK(contains(bad.out, "verdict: CertificateInvalid"));
  CHECK(contains(bad.out, "never proves non-isomorphism"));
}

TEST_CASE("cli: search over Q is refused, table over GF(2) dim 6 is refused") {
  auto r = run_cli("iso catalog:L5.6 catalog:L5.7 --field Q --truncate 5 --search");
  CHECK(r.exit_code == 1);
  CHECK(run_cli("table --dim 6 --field \"GF(2)\"").exit_code == 1);
}

TEST_CASE("cli: pinned golden outputs") {
  auto fp = run_cli("fingerprint --catalog K6.9 --field \"GF(5)\" --truncate 4");
  CHECK(data_section(fp.out) ==
        "command: uea fingerprint --catalog K6.9 --field GF(5) --truncate 4\n"
        "field: GF(5)\n"
        "input: catalog K6.9\n"
        "truncation: 4\n"
        "power-dims: 25 22 15\n"
        "center-dim: 17\n"
        "center-mod-powers: 1 2 17\n"
        "center-meet-powers: 16 15 0\n");

  auto sc = run_cli("screen --dim 5 --field Q --truncate 4");
  CHECK(data_section(sc.out) ==
        "command: uea screen --dim 5 --field Q --truncate 4\n"
        "field: Q\n"
        "dim: 5\n"
        "truncation: 4\n"
        "bucket.1: L5.1  [components(5)]\n"
        "bucket.2: L5.2  [components(4,1)]\n"
        "bucket.3: L5.3 L5.5  [components(3,1,1) centralizers(4,5)]\n"
        "bucket.4: L5.4  [components(4,1)]\n"
        "bucket.5: L5.6 L5.7  [components(2,1,1,1) centralizers(4,4,5)]\n"
        "bucket.6: L5.8  [components(3,2)]\n"
        "bucket.7: L5.9  [components(2,1,2)]\n"
        "pair.1: L5.3 vs L5.5: NotIsomorphic (invariant:fingerprint; "
        "center_dim=16 vs 15)\n"
        "pair.2: L5.6 vs L5.7: Inconclusive (invariant:fingerprint; fingerprints "
        "agree; run a search over a finite field to decide)\n"
        "note: L5.2 | L5.4: split, class <= 2 entries are determined by their "
        "graded algebra and classification entries differ\n");

  auto gr = run_cli("gr --catalog K6.24 --param 1 --field \"GF(5)\"");
  CHECK(data_section(gr.out) ==
        "# command: uea gr --catalog K6.24 --param 1 --field GF(5)\n"
        "# field: GF(5)\n"
        "# input: catalog K6.24(1)\n"
        "# component-dims: (3, 1, 2)\n"
        "# key: components(3,1,2) centralizers(4,6)\n"
        "field GF(5)\n"
        "dim 6\n"
        "weights 1 1 1 2 3 3\n"
        "[1,2] = 1*e.4\n"
        "[1,4] = 1*e.5\n"
        "[2,4] = 1*e.6\n");
}
