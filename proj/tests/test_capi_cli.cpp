// Licensed under the Apache License 2.0 (see LICENSE file).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "ytx/ytx.h"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "ytx_capi_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const auto p = kWork / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::string& args) {
  const auto out = kWork / "stdout.txt";
  const auto err = kWork / "stderr.txt";
  const std::string cmd = std::string("\"") + YTX_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string skewed_csv(int n) {
  std::string s = "x1,x2,y\n";
  for (int i = 1; i <= n; ++i) {
    const double x1 = i % 7, x2 = (i * 13) % 11;
    s += std::to_string(x1) + "," + std::to_string(x2) + "," + std::to_string(std::exp(0.3 * x1 + 0.1 * x2) + i % 3) +
         "\n";
  }
  return s;
}

const std::string kAmpg = std::string(YTX_TEST_DATA_DIR) + "/auto_mpg.csv";

}  // namespace

TEST_CASE("C API: dataset, fit, apply, serialize") {
  const auto path = write("api.csv", skewed_csv(40));
  ytx_dataset* ds = nullptr;
  REQUIRE(ytx_dataset_load_csv(path.c_str(), nullptr, &ds) == YTX_OK);
  size_t rows = 0, features = 0;
  REQUIRE(ytx_dataset_shape(ds, &rows, &features) == YTX_OK);
  CHECK(rows == 40);
  CHECK(features == 2);

  ytx_transform* t = nullptr;
  REQUIRE(ytx_transform_fit(ds, "yeo-johnson", nullptr, &t) == YTX_OK);
  CHECK(std::string(ytx_transform_kind(t)) == "yeo-johnson");
  const double* y = nullptr;
  size_t n = 0;
  REQUIRE(ytx_dataset_target(ds, &y, &n) == YTX_OK);
  std::vector<double> z(n), back(n);
  REQUIRE(ytx_transform_forward(t, nullptr, y, n, z.data()) == YTX_OK);
  REQUIRE(ytx_transform_inverse(t, nullptr, z.data(), n, back.data()) == YTX_OK);
  for (size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(y[i]).epsilon(1e-12));

  char* json = nullptr;
  REQUIRE(ytx_transform_to_json(t, &json) == YTX_OK);
  ytx_transform* t2 = nullptr;
  REQUIRE(ytx_transform_from_json(json, &t2) == YTX_OK);
  char* json2 = nullptr;
  REQUIRE(ytx_transform_to_json(t2, &json2) == YTX_OK);
  CHECK(std::string(json) == std::string(json2));
  ytx_string_free(json);
  ytx_string_free(json2);
  ytx_transform_free(t2);
  ytx_transform_free(t);
  ytx_dataset_free(ds);
}

TEST_CASE("C API: status codes") {
  ytx_dataset* ds = nullptr;
  CHECK(ytx_dataset_load_csv(nullptr, nullptr, &ds) == YTX_ERR_INVALID_ARGUMENT);
  CHECK(ytx_dataset_load_csv((kWork / "missing.csv").c_str(), nullptr, &ds) == YTX_ERR_DATA);
  const auto path = write("neg.csv", "x,y\n1,4\n2,-1\n3,9\n");
  CHECK(ytx_dataset_load_csv(path.c_str(), "{\"target\":", &ds) == YTX_ERR_CONFIG);
  CHECK(ytx_dataset_load_csv(path.c_str(), "{\"target\":\"nope\"}", &ds) == YTX_ERR_CONFIG);
  REQUIRE(ytx_dataset_load_csv(path.c_str(), "{\"target\":\"y\"}", &ds) == YTX_OK);
  ytx_transform* t = nullptr;
  CHECK(ytx_transform_fit(ds, "bogus", nullptr, &t) == YTX_ERR_CONFIG);
  CHECK(ytx_transform_fit(ds, "sqrt", nullptr, &t) == YTX_ERR_DOMAIN);
  CHECK(std::string(ytx_last_error()).find("index 1") != std::string::npos);
  CHECK(ytx_transform_fit(ds, "subject-center", nullptr, &t) == YTX_ERR_CONFIG);
  CHECK(t == nullptr);
  CHECK(ytx_transform_kind_known("quantile-uniform"));
  CHECK_FALSE(ytx_transform_kind_known("quantile"));
  ytx_dataset_free(ds);
}

TEST_CASE("CLI: diagnose") {
  const auto data = write("diag.csv", skewed_csv(60));
  const auto out = kWork / "diag.json";
  auto r = cli("diagnose --input " + q(data) + " --out-json " + q(out));
  REQUIRE(r.code == 0);
  const auto j = Json::parse(slurp(out));
  CHECK(j.contains("distribution"));
  for (const char* key : {"subjective", "frame", "trend", "context"}) CHECK_FALSE(j.contains(key));
  CHECK(r.out.find("distribution") != std::string::npos);

  CHECK(cli("diagnose --input " + q(data) + " --transform nonsense").code == 2);
  CHECK(cli("diagnose --input " + q(data) + " --threshold skew").code == 2);
  CHECK(cli("diagnose --input " + q(data) + " --threshold colour=1").code == 2);
  CHECK(cli("diagnose --input " + q(kWork / "absent.csv")).code == 3);
  CHECK(cli("diagnose --input " + q(data) + " --roles '{\"target\":\"zzz\"}'").code == 2);
  CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("CLI: roles from a file") {
  const auto data = write("roles_data.csv", skewed_csv(60));
  const auto roles = write("roles.json", "{\"target\": \"x2\", \"ignore\": [\"y\"]}");
  auto r = cli("diagnose --input " + q(data) + " --roles " + q(roles) + " --out-json " + q(kWork / "r.json"));
  CHECK(r.code == 0);
}

TEST_CASE("CLI: transform") {
  const auto data = write("pos.csv", "a,y\n1,0.30000000000000004\n2,1.10\n3,1e3\n4,7\n");
  const auto out = kWork / "pos_ln.csv";
  auto r = cli("transform --input " + q(data) + " --transform log-offset --out-csv " + q(out));
  REQUIRE(r.code == 0);
  const auto sidecar = Json::parse(slurp(kWork / "pos_ln.csv.json"));
  CHECK(sidecar.at("params") == Json{{"offset", 1.0}});
  CHECK(sidecar.at("kind") == "log-offset");

  const auto same = kWork / "pos_id.csv";
  REQUIRE(cli("transform --input " + q(data) + " --transform identity --out-csv " + q(same)).code == 0);
  CHECK(slurp(same) == slurp(data));

  const auto neg = write("negative.csv", "a,y\n1,4\n2,9\n3,-2\n");
  auto bad = cli("transform --input " + q(neg) + " --transform sqrt --out-csv " + q(kWork / "n.csv"));
  CHECK(bad.code == 4);
  CHECK(bad.err.find("index 2") != std::string::npos);

  CHECK(cli("transform --input " + q(data) + " --transform sqrt --transform identity --out-csv " + q(out)).code == 2);
}

TEST_CASE("CLI: benchmark and report") {
  const auto json1 = kWork / "b1.json";
  const auto json2 = kWork / "b2.json";
  const auto md = kWork / "b.md";
  const std::string base = "benchmark --input " + q(kAmpg) +
                           " --roles '{\"target\":\"mpg\"}' --model ridge --transform log-offset --name AMPG";
  REQUIRE(cli(base + " --out-json " + q(json1) + " --out-md " + q(md)).code == 0);
  REQUIRE(cli(base + " --out-json " + q(json2)).code == 0);
  CHECK(slurp(json1) == slurp(json2));

  const std::string table = slurp(md);
  CHECK(table.find("| Dataset | Base | Ln |") != std::string::npos);
  std::size_t data_rows = 0;
  std::istringstream lines(table);
  for (std::string line; std::getline(lines, line);) data_rows += line.rfind("| AMPG |", 0) == 0;
  CHECK(data_rows == 2);  // one per metric table

  auto rep = cli("report --in " + q(json1) + " --in " + q(json2));
  CHECK(rep.code == 0);
  CHECK(rep.out.find("| AMPG |") != std::string::npos);
  CHECK(cli("report --in " + q(kWork / "pos.csv")).code == 2);
}

TEST_CASE("CLI: automatic transform selection") {
  const auto diag = kWork / "auto_diag.json";
  const auto bench = kWork / "auto_bench.json";
  const std::string common = " --input " + q(kAmpg) + " --roles '{\"target\":\"mpg\"}'";
  REQUIRE(cli("diagnose" + common + " --out-json " + q(diag)).code == 0);
  REQUIRE(cli("benchmark" + common + " --model ridge --transform auto --out-json " + q(bench)).code == 0);
  std::vector<std::string> expected{"identity"};
  const auto report = Json::parse(slurp(diag));
  for (const auto& rec : report.at("recommendations")) expected.push_back(rec.at("transform").get<std::string>());
  CHECK(Json::parse(slurp(bench)).at("transforms").get<std::vector<std::string>>() == expected);
}
