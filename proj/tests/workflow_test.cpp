// Copyright 2026 The qcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qcat/workflow.hpp"
#include "scenarios.hpp"

namespace {

using namespace qcat;
namespace fs = std::filesystem;

const fs::path kData = QCAT_DATA_DIR;
const std::string kCli = QCAT_CLI_PATH;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

/// Manifest with the wall-clock fields removed.
json stable_manifest(const fs::path& dir) {
  json m = read_json(dir / "manifest.json");
  for (auto& st : m["stages"]) st.erase("wall_seconds");
  return m;
}

class Workflow : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / ("qcat_wf_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run_cli(const std::string& args, std::string* err = nullptr) const {
    const fs::path errfile = root_ / "stderr.txt";
    const std::string cmd = "cd '" + root_.string() + "' && '" + kCli + "' " + args + " >'" +
                            (root_ / "stdout.txt").string() + "' 2>'" + errfile.string() + "'";
    const int rc = std::system(cmd.c_str());
    if (err) *err = slurp(errfile);
    fs::remove(errfile);
    fs::remove(root_ / "stdout.txt");
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  int run(const std::string& sub, json options, const std::string& out, std::string* err = nullptr) const {
    std::ostringstream sink;
    const int rc = execute(RunConfig{sub, std::move(options), root_ / out}, sink);
    if (err) *err = sink.str();
    return rc;
  }

  fs::path root_;
};

TEST_F(Workflow, EncodeRoundTripsThroughPauliText) {
  ASSERT_EQ(run("encode", {{"fcidump", (kData / "dimer.fcidump").string()}, {"mapping", "jw"}}, "enc"), 0);
  const std::string text = slurp(root_ / "enc" / "hamiltonian.pauli");
  std::istringstream is(text);
  const PauliOperator op = read_pauli_operator(is);
  std::ostringstream again;
  write_pauli_operator(again, op);
  EXPECT_EQ(again.str(), text);

  const auto h = ingest_fcidump((kData / "dimer.fcidump").string());
  std::ostringstream direct;
  write_pauli_operator(direct, qubit_hamiltonian(h, Encoding::kJordanWigner, kDefaultDropThreshold));
  EXPECT_EQ(direct.str(), text);

  const json res = read_json(root_ / "enc" / "resources.json");
  EXPECT_EQ(res["qubits"], 4);
  EXPECT_EQ(res["mapping"], "jw");
  EXPECT_EQ(res["pauli_terms"], op.n_terms());
}

TEST_F(Workflow, EncodeEverySupportedMapping) {
  for (const std::string m : {"jw", "bk", "parity"}) {
    ASSERT_EQ(run("encode", {{"fcidump", (kData / "dimer.fcidump").string()}, {"mapping", m}}, "enc_" + m), 0) << m;
    EXPECT_EQ(read_json(root_ / ("enc_" + m) / "resources.json")["qubits"], 4);
  }
  DvrSystem sys;
  sys.grid.axes = {DvrAxis::spanning(-3.0, 3.0, 8, 1.0)};
  sys.surfaces = {tabulate(sys.grid, [](auto x) { return 0.5 * x[0] * x[0]; })};
  {
    std::ofstream os(root_ / "ho8.pes");
    write_pes(os, sys);
  }
  ASSERT_EQ(run("encode", {{"pes", (root_ / "ho8.pes").string()}, {"mapping", "binary"}}, "bin"), 0);
  EXPECT_EQ(read_json(root_ / "bin" / "resources.json")["qubits"], 3);
  ASSERT_EQ(run("encode", {{"pes", (root_ / "ho8.pes").string()}, {"mapping", "direct"}}, "dir"), 0);
  EXPECT_EQ(read_json(root_ / "dir" / "resources.json")["qubits"], 8);
  EXPECT_EQ(run("encode", {{"pes", (kData / "eckart.pes").string()}, {"mapping", "binary"}}, "odd"), 2);
}

TEST_F(Workflow, EigensolveDimerMatchesClosedForm) {
  ASSERT_EQ(run("eigensolve", {{"fcidump", (kData / "dimer.fcidump").string()}}, "eig"), 0);
  const json e = read_json(root_ / "eig" / "eigen.json");
  EXPECT_NEAR(e["eigenvalues"][0].get<double>(), 4.0 - 2.0 * std::sqrt(5.0), 1e-8);
  EXPECT_TRUE(e.contains("seed"));
}

TEST_F(Workflow, NqdCliMatchesInProcessPropagation) {
  ASSERT_EQ(run_cli("nqd --config '" + (kData / "nqd_eckart.json").string() + "' --out nqd"), 0);
  const json s = read_json(root_ / "nqd" / "summary.json");

  const scenario::Eckart ek;
  auto sys = ek.system();
  const auto wp = ek.packet(sys);
  const DividingSurface ds{0, 0.0, true};
  PropagationOptions opt;
  opt.method = PropagationMethod::kTrotter2;
  const auto last = propagate(wp, 0.5, 731, opt);
  EXPECT_NEAR(s["Q_final"].get<double>(), product_probability(last, ds), 1e-9);

  const double ref = oracle::eckart_transmission(ek.mean_energy(), ek.mass, ek.v0, ek.a);
  EXPECT_NEAR(s["Q_final"].get<double>(), ref, 0.05 * ref);
  EXPECT_NEAR(s["integrated_flux"].get<double>(), s["delta_Q"].get<double>(), 0.01 * s["delta_Q"].get<double>());

  std::ifstream csv(root_ / "nqd" / "series.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("t,Q,J,norm", 0), 0u) << header;
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 732);
}

TEST_F(Workflow, UnknownFlagPrintsUsageAndExitsTwo) {
  std::string err;
  EXPECT_EQ(run_cli("encode --no-such-flag", &err), 2);
  EXPECT_NE(err.find("Usage"), std::string::npos);
  EXPECT_NE(err.find("\"kind\":\"parse\""), std::string::npos);
  EXPECT_EQ(run_cli("frobnicate", &err), 2);
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run("frobnicate", json::object(), "x"), 2);
}

TEST_F(Workflow, RepeatedRunsAreBitIdentical) {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"encode", "--fcidump '" + (kData / "dimer.fcidump").string() + "' --mapping bk"},
      {"eigensolve", "--fcidump '" + (kData / "pathway" / "b_r.fcidump").string() + "' --k 2"},
      {"pathway", "--manifest '" + (kData / "pathway" / "manifest.json").string() + "'"},
      {"qmd", "--config '" + (kData / "qmd_dimer.json").string() + "' --count 6 --dump-trajectories"},
      {"resources", "--quiet"},
  };
  for (const auto& [sub, args] : runs) {
    ASSERT_EQ(run_cli(sub + " " + args + " --out a_" + sub), 0) << sub;
    ASSERT_EQ(run_cli(sub + " " + args + " --out b_" + sub), 0) << sub;
    const fs::path a = root_ / ("a_" + sub), b = root_ / ("b_" + sub);
    EXPECT_EQ(stable_manifest(a), stable_manifest(b)) << sub;
    for (const auto& name : read_json(a / "manifest.json")["outputs"]) {
      EXPECT_EQ(slurp(a / name.get<std::string>()), slurp(b / name.get<std::string>())) << sub << ' ' << name;
    }
  }
}

TEST_F(Workflow, ManifestReplayReproducesOutputs) {
  ASSERT_EQ(run_cli("qmd --config '" + (kData / "qmd_dimer.json").string() + "' --count 5 --seed 11 --out first"), 0);
  ASSERT_EQ(run_cli("qmd --config first/manifest.json --out replay"), 0);
  EXPECT_EQ(slurp(root_ / "first" / "summary.json"), slurp(root_ / "replay" / "summary.json"));
  EXPECT_EQ(read_json(root_ / "replay" / "summary.json")["seed"], 11);
  EXPECT_EQ(read_json(root_ / "replay" / "manifest.json")["config"],
            read_json(root_ / "first" / "manifest.json")["config"]);
  EXPECT_EQ(run_cli("nqd --config first/manifest.json --out wrong"), 2);
}

TEST_F(Workflow, SeedChangesSampledEnsemble) {
  json cfg = read_json(kData / "qmd_dimer.json");
  cfg["count"] = 4;
  cfg["dump_trajectories"] = true;
  cfg["seed"] = 1;
  ASSERT_EQ(run("qmd", cfg, "s1"), 0);
  cfg["seed"] = 2;
  ASSERT_EQ(run("qmd", cfg, "s2"), 0);
  EXPECT_NE(slurp(root_ / "s1" / "trajectories.csv"), slurp(root_ / "s2" / "trajectories.csv"));
}

TEST_F(Workflow, CapRefusalExitsFourAndStillWritesManifest) {
  std::string err;
  const std::string args = "eigensolve --fcidump '" + (kData / "pathway" / "b_r.fcidump").string() + "' --max-qubits 4 --out cap";
  EXPECT_EQ(run_cli(args, &err), 4);
  const json e = json::parse(err);
  EXPECT_EQ(e["error"]["kind"], "cap_exceeded");
  const json m = read_json(root_ / "cap" / "manifest.json");
  EXPECT_EQ(m["status"], "error");
  EXPECT_EQ(m["error"]["exit_code"], 4);
}

TEST_F(Workflow, BoundaryLeakExitsThree) {
  auto sys = std::make_shared<DvrSystem>();
  sys->grid.axes = {DvrAxis::spanning(-8.0, 8.0, 64, 1.0)};
  sys->surfaces = {RVec::Zero(64)};
  {
    std::ofstream os(root_ / "flat.pes");
    write_pes(os, *sys);
  }
  const json cfg = {{"pes", (root_ / "flat.pes").string()},
                    {"initial", {{"center", {0.0}}, {"widths", {1.0}}, {"momenta", {4.0}}}},
                    {"dividing_surface", {{"threshold", 0.0}}},
                    {"dt", 0.1},
                    {"steps", 200}};
  std::string err;
  EXPECT_EQ(run("nqd", cfg, "leak", &err), 3);
  EXPECT_NE(err.find("numerical"), std::string::npos);
  EXPECT_EQ(read_json(root_ / "leak" / "manifest.json")["error"]["kind"], "numerical");
}

TEST_F(Workflow, MissingInputIsParseError) {
  EXPECT_EQ(run("nqd", {{"pes", (root_ / "absent.pes").string()}, {"dt", 1.0}}, "missing"), 2);
  EXPECT_EQ(run("pathway", json::object(), "nomanifest"), 2);
  EXPECT_EQ(read_json(root_ / "nomanifest" / "manifest.json")["status"], "error");
}

TEST_F(Workflow, WritesStayInsideOutputDirectory) {
  auto listing = [](const fs::path& dir) {
    std::set<std::string> names;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      names.insert(fs::relative(e.path(), dir).string() + "@" +
                   std::to_string(e.is_regular_file() ? fs::file_size(e.path()) : 0));
    }
    return names;
  };
  const auto data_before = listing(kData);
  ASSERT_EQ(run_cli("pathway --manifest '" + (kData / "pathway" / "manifest.json").string() + "' --out deep/out"), 0);
  ASSERT_EQ(run_cli("nqd --config '" + (kData / "nqd_eckart.json").string() + "' --steps 20 --out n"), 0);
  EXPECT_EQ(listing(kData), data_before);
  std::set<std::string> top;
  for (const auto& e : fs::directory_iterator(root_)) top.insert(e.path().filename().string());
  EXPECT_EQ(top, (std::set<std::string>{"deep", "n"}));
  std::set<std::string> inner;
  for (const auto& e : fs::directory_iterator(root_ / "deep")) inner.insert(e.path().filename().string());
  EXPECT_EQ(inner, std::set<std::string>{"out"});
}

TEST_F(Workflow, PathwayReportsRankingAndCsv) {
  ASSERT_EQ(run("pathway", {{"manifest", (kData / "pathway" / "manifest.json").string()}}, "pw"), 0);
  const json r = read_json(root_ / "pw" / "report.json");
  ASSERT_TRUE(r.is_object());
  const std::string csv = slurp(root_ / "pw" / "report.csv");
  EXPECT_EQ(csv.rfind("rank,catalyst,pathway,ea_hartree", 0), 0u);
  EXPECT_NE(csv.find("cat_A,p2"), std::string::npos);
}

TEST_F(Workflow, ResourceTablesReproduceQuotedCounts) {
  ASSERT_EQ(run("resources", {{"quiet", true}}, "res"), 0);
  const std::string md = slurp(root_ / "res" / "resources.md");
  for (const std::string n : {"3840", "120", "720", "64", "70"}) {
    EXPECT_NE(md.find(n), std::string::npos) << n;
  }
}

TEST(Ingest, PesLineCountErrorNamesLineAndGridSize) {
  const fs::path p = fs::temp_directory_path() / ("qcat_bad_" + std::to_string(::getpid()) + ".pes");
  {
    std::ofstream os(p);
    os << "dims=2\naxis 0: 3 0 1 1\naxis 1: 2 0 1 1\nsurfaces=1\n0\n0\n0\n0\n0\n";
  }
  try {
    ingest_pes(p.string());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(p.string() + ":"), std::string::npos) << msg;
    EXPECT_NE(msg.find("6"), std::string::npos) << msg;
  }
  fs::remove(p);
}

TEST(Ingest, FcidumpAcceptsFortranExponents) {
  const fs::path p = fs::temp_directory_path() / ("qcat_d_" + std::to_string(::getpid()) + ".fcidump");
  {
    std::ofstream os(p);
    os << "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n8.0D+00 1 1 1 1\n8.0D0 2 2 2 2\n-1.0D-00 2 1 0 0\n1.0D-03 0 0 0 0\n";
  }
  const auto h = ingest_fcidump(p.string());
  EXPECT_DOUBLE_EQ(h.core_energy, 1e-3);
  fs::remove(p);
}

}  // namespace
