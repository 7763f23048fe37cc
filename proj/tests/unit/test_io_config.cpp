#include <doctest.h>

#include <filesystem>

#include "kwlab/error.hpp"
#include "kwlab/experiments.hpp"
#include "kwlab/io.hpp"

using namespace kwlab;

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(3.0) == "3");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV rendering carries the schema line and quotes strings") {
  CsvTable t;
  t.kind = "sojourn";
  t.columns = {"t", "kind", "family"};
  t.tags = {{"c", "3/5"}};
  t.rows.push_back({0.5, std::string("predicted"), std::string("t0(1,0)")});
  t.rows.push_back({std::int64_t{2}, std::string("detected"), std::string("a,b")});
  const auto s = render_csv(t);
  CHECK(s == "# kwlab schema_version=1 kind=sojourn c=3/5\nt,kind,family\n0.5,predicted,\"t0(1,0)\"\n2,detected,\"a,b\"\n");
  t.rows.push_back({1.0});
  CHECK_THROWS_AS(render_csv(t), Error);
}

TEST_CASE("sha256 of known inputs") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("write_text is readable and hashes like the buffer") {
  const auto dir = std::filesystem::temp_directory_path() / "kwlab_io_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / "x.txt";
  write_text(p, "hello\n");
  CHECK(read_text(p) == "hello\n");
  CHECK(sha256_file(p) == sha256_hex("hello\n"));
  CHECK_FALSE(std::filesystem::exists(dir / "x.txt.tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment registry") {
  const auto& all = list_experiments();
  CHECK(all.size() == 10);
  CHECK(find_experiment("torus-weyl").budget_seconds == 60.0);
  CHECK_THROWS_AS(find_experiment("nope"), UnknownExperimentError);
}

TEST_CASE("config YAML round-trips") {
  auto cfg = ExperimentConfig::defaults_for("sojourn-detect", "sphere2");
  cfg.seed = 99;
  cfg.T_grid = {2, 4};
  const auto back = ExperimentConfig::from_yaml(cfg.to_yaml());
  CHECK(back.experiment == cfg.experiment);
  CHECK(back.model == cfg.model);
  CHECK(back.c == cfg.c);
  CHECK(back.window == cfg.window);
  CHECK(back.lambda_max == cfg.lambda_max);
  CHECK(back.t_min == cfg.t_min);
  CHECK(back.t_max == cfg.t_max);
  CHECK(back.dt == cfg.dt);
  CHECK(back.T_grid == cfg.T_grid);
  CHECK(back.seed == 99);
  CHECK(back.to_yaml() == cfg.to_yaml());
}

TEST_CASE("config overlay and validation") {
  const auto cfg = ExperimentConfig::from_yaml("ladder:\n  c: 3/5\nspectrum:\n  lambda_max: 50\n", "torus-weyl");
  CHECK(cfg.experiment == "torus-weyl");
  CHECK(cfg.c == "3/5");
  CHECK(cfg.lambda_max == 50.0);
  CHECK_THROWS_AS(ExperimentConfig::from_yaml("experiment: torus-weyl\n", "zonal-meridian"), InvalidParameterError);
  auto bad = ExperimentConfig::defaults_for("torus-weyl");
  bad.lambda_max = -1;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = ExperimentConfig::defaults_for("torus-weyl");
  bad.window = "triangle";
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}
