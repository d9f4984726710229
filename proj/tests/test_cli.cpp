// End-to-end checks of the command-line interface: exit codes, table output,
// and contour files. Usage: test_cli <path-to-cli-binary> <path-to-data-dir>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run(const std::string& cmd) {
  const std::string out_path = "/tmp/candual_cli_out_" + std::to_string(::getpid());
  const std::string err_path = "/tmp/candual_cli_err_" + std::to_string(::getpid());
  const int status = std::system((cmd + " > " + out_path + " 2> " + err_path).c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

struct Cell {
  double z1 = 0.0, z2 = 0.0, value = 0.0;
  bool available = false;
};

std::vector<Cell> parse_contour(const std::string& path, int res) {
  std::ifstream in(path);
  std::vector<Cell> cells(static_cast<std::size_t>(res) * res);
  std::string line;
  std::getline(in, line);  // header
  std::size_t k = 0;
  while (std::getline(in, line) && k < cells.size()) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    Cell& cell = cells[k++];
    cell.z1 = std::stod(line.substr(0, c1));
    cell.z2 = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    const std::string v = line.substr(c2 + 1);
    cell.available = (v != "NA");
    if (cell.available) cell.value = std::stod(v);
  }
  return cells;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <cli-binary> <data-dir>\n");
    return 2;
  }
  const std::string cli = std::string("\"") + argv[1] + "\"";
  const std::string data = argv[2];
  const std::string tmp = "/tmp/candual_cli_" + std::to_string(::getpid());

  // solve: example 1 converges with the published value.
  {
    const RunResult r = run(cli + " solve " + data + "/example1.json");
    expect(r.exit_code == 0, "solve example1 exits 0");
    expect(r.out.find("MIN_MAX") != std::string::npos, "solve example1 reports MIN_MAX");
    expect(r.out.find("-2.8428") != std::string::npos, "solve example1 prints the published value");
  }

  // solve: example 4 shows all three triality classes.
  {
    const RunResult r = run(cli + " solve " + data + "/example4.json");
    expect(r.exit_code == 0, "solve example4 exits 0");
    expect(r.out.find("MIN_MAX") != std::string::npos &&
           r.out.find("DOUBLE_MAX") != std::string::npos &&
           r.out.find("DOUBLE_MIN") != std::string::npos,
           "solve example4 lists all three triality classes");
  }

  // solve: schema/validation failures exit 1 with the offending field.
  {
    const std::string bad = tmp + "_bad.json";
    write_file(bad, R"({"n":2,"p":0,"r":1,"A":[],"alpha":[],"B":[[1,0,0,-2]],"beta":[0],
                        "C":[1,0,0,1],"f":[0,0]})");
    const RunResult r = run(cli + " solve " + bad);
    expect(r.exit_code == 1, "solve rejects a non-SPD B with exit 1");
    expect(r.err.find("B[0]") != std::string::npos && r.err.find("-2") != std::string::npos,
           "solve names the offending matrix and eigenvalue");
    std::remove(bad.c_str());
  }
  {
    const RunResult r = run(cli + " solve " + data + "/missing.json");
    expect(r.exit_code == 1, "solve on a missing file exits 1");
  }

  // check: passes on example 2 and reports the skipped local minimum of
  // example 3.
  {
    const RunResult r = run(cli + " check " + data + "/example2.json");
    expect(r.exit_code == 0, "check example2 exits 0");
    expect(r.out.find("FAIL") == std::string::npos, "check example2 has no FAIL lines");
    expect(r.out.find("-17.1934") != std::string::npos, "check example2 shows the oracle value");
  }
  {
    const RunResult r = run(cli + " check " + data + "/example3.json");
    expect(r.exit_code == 0, "check example3 exits 0");
    expect(r.out.find("-3.98411") != std::string::npos,
           "check example3 lists the skipped local minimum");
  }

  // check: the oracle precondition n <= 3 exits 2.
  {
    const std::string big = tmp + "_n4.json";
    write_file(big, R"({"n":4,"p":1,"r":1,
      "A":[[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]],"alpha":[0],
      "B":[[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]],"beta":[1],
      "C":[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1],"f":[1,0,0,0]})");
    const RunResult r = run(cli + " check " + big);
    expect(r.exit_code == 2, "check with n = 4 exits 2");
    expect(r.err.find("n <= 3") != std::string::npos, "check explains the n <= 3 limit");
    std::remove(big.c_str());
  }

  // contour: primal grid has the full row count.
  {
    const std::string csv = tmp + "_primal.csv";
    const RunResult r = run(cli + " contour " + data + "/example2.json --primal --window -2,2,-2,2 --res 201 --out " + csv);
    expect(r.exit_code == 0, "contour primal exits 0");
    std::ifstream in(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    expect(rows == 201u * 201u + 1, "contour primal writes 201x201 rows plus header");
    std::remove(csv.c_str());
  }

  // contour: the dual window around the published critical point has its
  // minimum-gradient cell within one cell of it.
  {
    const std::string csv = tmp + "_dual.csv";
    const int res = 41;
    const RunResult r = run(cli + " contour " + data + "/example1.json --dual --window 1.0,3.0,-1.2,0.8 --res 41 --out " + csv);
    expect(r.exit_code == 0, "contour dual exits 0");
    const auto cells = parse_contour(csv, res);
    const double h1 = 2.0 / (res - 1), h2 = 2.0 / (res - 1);
    const auto at = [&](int i, int j) -> const Cell& {
      return cells[static_cast<std::size_t>(i) * res + j];
    };
    double best = 1e300;
    int bi = -1, bj = -1;
    for (int i = 1; i + 1 < res; ++i) {
      for (int j = 1; j + 1 < res; ++j) {
        if (!at(i, j).available || !at(i - 1, j).available || !at(i + 1, j).available ||
            !at(i, j - 1).available || !at(i, j + 1).available)
          continue;
        const double g1 = (at(i + 1, j).value - at(i - 1, j).value) / (2.0 * h1);
        const double g2 = (at(i, j + 1).value - at(i, j - 1).value) / (2.0 * h2);
        const double norm = std::hypot(g1, g2);
        if (norm < best) {
          best = norm;
          bi = i;
          bj = j;
        }
      }
    }
    const bool near = bi >= 0 && std::abs(at(bi, bj).z1 - 2.01147) <= h1 + 1e-12 &&
                      std::abs(at(bi, bj).z2 - (-0.223104)) <= h2 + 1e-12;
    expect(near, "dual contour minimum-gradient cell sits next to the critical point");
    bool has_na = false;
    for (const auto& cell : cells) has_na = has_na || !cell.available;
    expect(has_na, "dual contour marks singular cells NA");
    std::remove(csv.c_str());
  }

  // contour: dimension preconditions exit 2.
  {
    const std::string one = tmp + "_m1.json";
    write_file(one, R"({"n":2,"p":0,"r":1,"A":[],"alpha":[],"B":[[1,0,0,2]],"beta":[1],
                        "C":[2,0,0,1],"f":[0.5,0.5]})");
    const RunResult r = run(cli + " contour " + one + " --dual --window 0,1,0,1 --res 11 --out " + tmp + "_x.csv");
    expect(r.exit_code == 2, "dual contour with m = 1 exits 2");
    std::remove(one.c_str());
  }

  if (failures == 0) std::printf("all CLI checks passed\n");
  return failures == 0 ? 0 : 1;
}
