#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// End-to-end checks of the strip-homog binary: exit-code contract and the
// exported file formats.  The binary path arrives via STRIP_HOMOG_BIN.

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* p = std::getenv("STRIP_HOMOG_BIN");
  REQUIRE_MESSAGE(p != nullptr, "STRIP_HOMOG_BIN not set");
  return p;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "shcliXXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const {
    return (path / name).string();
  }
};

int run(const std::string& args, const TempDir& d) {
  const std::string cmd =
      bin() + " " + args + " > " + (d / "stdout.txt") + " 2> " + (d / "stderr.txt");
  const int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  return WIFEXITED(st) ? WEXITSTATUS(st) : -2;
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

void write_config(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  TempDir d;
  CHECK(run("", d) == 2);                        // a subcommand is required
  CHECK(run("frobnicate", d) == 2);              // unknown subcommand
  CHECK(run("study --eps 0.2,0.1,0.05", d) == 2);  // --case is required
  CHECK(run("--help", d) == 0);
  CHECK(run("solve --config " + (d / "absent.cfg"), d) == 2);

  write_config(d / "bad_key.cfg", "eps = 0.2\nwarp = 9\n");
  CHECK(run("mesh --config " + (d / "bad_key.cfg"), d) == 2);
  write_config(d / "bad_val.cfg", "eps = fast\n");
  CHECK(run("mesh --config " + (d / "bad_val.cfg"), d) == 2);
  write_config(d / "bad_law.cfg", "eps = 0.2\neta_law = lin:3\n");
  CHECK(run("mesh --config " + (d / "bad_law.cfg"), d) == 2);
  CHECK(run("cell --kind Q", d) == 2);
  CHECK(run("spectrum --regime warped", d) == 2);
}

TEST_CASE("mesh subcommand exports the grid and the hole table") {
  TempDir d;
  write_config(d / "m.cfg",
               "# reference model, coarse\n"
               "eps = 0.3\n"
               "eta_law = const:0.5\n"
               "h_far = 0.15\n");
  CHECK(run("mesh --config " + (d / "m.cfg") + " --out " + (d / "out"), d) == 0);
  CHECK(fs::exists(d / "out/mesh.txt"));
  CHECK(first_line(d / "out/mesh.txt") == "strip-homog-mesh v1");
  CHECK(first_line(d / "out/holes.csv") == "s,bc_flag,shape_id");
  // 5 holes at 0.9k: header + 5 rows
  std::ifstream holes(d / "out/holes.csv");
  int rows = 0;
  std::string line;
  while (std::getline(holes, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("unresolvable hole scale exits 3") {
  TempDir d;
  // radius eps*eta below the coordinate resolution: the mesher must refuse
  write_config(d / "tiny.cfg", "eps = 0.2\neta_law = const:1e-18\n");
  CHECK(run("mesh --config " + (d / "tiny.cfg"), d) == 3);
}

TEST_CASE("solve subcommand writes the field and optional exports") {
  TempDir d;
  write_config(d / "s.cfg",
               "eps = 0.3\n"
               "eta_law = const:0.5\n"
               "case = dirichlet\n"
               "h_far = 0.15\n");
  CHECK(run("solve --config " + (d / "s.cfg") + " --corrected --export-system --out " +
                (d / "out"),
            d) == 0);
  CHECK(first_line(d / "out/field.csv") == "node_id,x,y,re,im");
  CHECK(first_line(d / "out/corrector.csv") == "node_id,x,y,re,im");
  CHECK(fs::file_size(d / "out/K.coo") > 0);
  CHECK(fs::file_size(d / "out/M.coo") > 0);
}

TEST_CASE("cell subcommand solves the cell and the flux problems") {
  TempDir d;
  CHECK(run("cell --kind D --eta 0.2 --H 4 --pitch 0.15 --out " + (d / "c"), d) == 0);
  CHECK(first_line(d / "c/cell.csv") == "node_id,x,y,re,im");
  const std::string out = first_line(d / "stdout.txt");
  CHECK(out.find("c+ = ") != std::string::npos);

  CHECK(run("cell --flux --pitch 0.12 --out " + (d / "f"), d) == 0);
  CHECK(fs::exists(d / "f/flux_potential.csv"));
}

TEST_CASE("study subcommand emits reports; --assert gates the exit code") {
  TempDir d;
  CHECK(run("study --case dirichlet --eta-law const:0.5 --eps 0.4,0.3,0.2 "
            "--h-far 0.2 --deterministic --out " + (d / "r"),
            d) == 0);
  CHECK(first_line(d / "r/report.csv") == "# strip-homog convergence report v1");
  CHECK(fs::exists(d / "r/report.json"));

  // every row fails to mesh -> no valid fit -> assertion failure
  CHECK(run("study --case dirichlet --eta-law const:1e-18 --eps 0.4,0.3,0.2 "
            "--h-far 0.2 --deterministic --assert --out " + (d / "r2"),
            d) == 4);
  std::ifstream csv(d / "r2/report.csv");
  std::string text((std::istreambuf_iterator<char>(csv)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find(",failed,") != std::string::npos);
}

TEST_CASE("spectrum subcommand reports the sweep") {
  TempDir d;
  CHECK(run("spectrum --regime dirichlet --eps 0.4,0.3 --k 2 --h-far 0.15 "
            "--out " + (d / "sp"),
            d) == 0);
  CHECK(first_line(d / "sp/spectrum.csv") == "# strip-homog spectrum report v1");
  std::ifstream csv(d / "sp/spectrum.csv");
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  CHECK(line.find("regime=dirichlet") != std::string::npos);
  std::getline(csv, line);
  CHECK(line == "eps,eta,i,perturbed,oracle,fem,gap1");
}
