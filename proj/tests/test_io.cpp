#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "wwl/config.hpp"
#include "wwl/instances.hpp"
#include "wwl/io.hpp"
#include "wwl/svg.hpp"

using namespace wwl;
namespace fs = std::filesystem;

namespace {
constexpr double kTau = 2.0 * 3.14159265358979323846;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("wwl_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("space file round trip through the lower triangle") {
  TempDir tmp;
  const Instance inst = make_circle(64, kTau);
  save_space(*inst.space, tmp.file("circle.json"));
  const auto back = load_space(tmp.file("circle.json"));
  REQUIRE(back->point_count() == 64);
  for (int i = 0; i < 64; ++i) {
    CHECK(back->mu(i) == inst.space->mu(i));
    for (int j = 0; j < i; ++j)
      CHECK(back->distance(i, j) == inst.space->distance(i, j));
  }
  CHECK(back->diameter() == inst.space->diameter());
}

TEST_CASE("coordinate documents rebuild their metric") {
  TempDir tmp;
  SUBCASE("circle geodesic") {
    CoordinateSpace doc;
    doc.label = "ring";
    doc.metric = "circle_geodesic";
    doc.circumference = 10.0;
    for (int i = 0; i < 10; ++i) {
      doc.coordinates.push_back({static_cast<double>(i)});
      doc.measure.push_back(1.0);
    }
    save_space_coordinates(doc, tmp.file("ring.json"));
    const auto s = load_space(tmp.file("ring.json"));
    CHECK(s->distance(0, 1) == doctest::Approx(1.0));
    CHECK(s->distance(0, 9) == doctest::Approx(1.0));  // wraps
    CHECK(s->distance(0, 5) == doctest::Approx(5.0));
  }
  SUBCASE("euclidean") {
    CoordinateSpace doc;
    doc.label = "square";
    doc.metric = "euclidean";
    doc.coordinates = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    doc.measure = {1, 1, 1, 1};
    save_space_coordinates(doc, tmp.file("sq.json"));
    const auto s = load_space(tmp.file("sq.json"));
    CHECK(s->distance(0, 3) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("sphere geodesic") {
    CoordinateSpace doc;
    doc.label = "octahedron";
    doc.metric = "sphere_geodesic";
    doc.coordinates = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                       {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    doc.measure = std::vector<double>(6, 1.0);
    save_space_coordinates(doc, tmp.file("oct.json"));
    const auto s = load_space(tmp.file("oct.json"));
    CHECK(s->distance(0, 2) == doctest::Approx(kTau / 4.0));
    CHECK(s->distance(0, 1) == doctest::Approx(kTau / 2.0));
  }
}

TEST_CASE("loader rejects malformed documents") {
  TempDir tmp;
  SUBCASE("negative measure") {
    std::ofstream(tmp.file("bad.json"))
        << R"({"label":"x","measure":[1,-1],"distance_matrix":[1]})";
    CHECK_THROWS_AS(load_space(tmp.file("bad.json")), ValidationError);
  }
  SUBCASE("both or neither distance source") {
    std::ofstream(tmp.file("none.json"))
        << R"({"label":"x","measure":[1,1]})";
    CHECK_THROWS_AS(load_space(tmp.file("none.json")), ValidationError);
  }
  SUBCASE("triangle violation is reported with a witness") {
    std::ofstream(tmp.file("tri.json"))
        << R"({"label":"x","measure":[1,1,1],"distance_matrix":[1,3,1]})";
    try {
      load_space(tmp.file("tri.json"));
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("triangle") != std::string::npos);
    }
  }
  SUBCASE("three-point equilateral lower triangle is valid") {
    std::ofstream(tmp.file("eq.json"))
        << R"({"label":"x","measure":[1,1,1],"distance_matrix":[1,1,1]})";
    const auto s = load_space(tmp.file("eq.json"));
    CHECK(s->diameter() == 1.0);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_space(tmp.file("absent.json")), ValidationError);
  }
}

TEST_CASE("operator file round trip") {
  TempDir tmp;
  const Instance inst = make_circle(32, kTau);
  save_space(*inst.space, tmp.file("space.json"));
  save_operator(inst.op, "space.json", tmp.file("op.json"));
  const DirichletOperator op = load_operator(tmp.file("op.json"));
  CHECK(op.edge_count() == inst.op.edge_count());
  Eigen::VectorXd f(32);
  for (int i = 0; i < 32; ++i) f[i] = std::sin(0.3 * i);
  CHECK((op.apply(f) - inst.op.apply(f)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("lattice export and import") {
  TempDir tmp;
  const Instance inst = make_circle(128, kTau);
  const Lattice lat = build_lattice(*inst.space, 0.5, LatticeOrder::random, 7);
  save_lattice(lat, tmp.file("lat.json"));
  const Lattice back = load_lattice(*inst.space, tmp.file("lat.json"));
  CHECK(back.rho == lat.rho);
  CHECK(back.centers == lat.centers);
  CHECK(back.multiplicity == lat.multiplicity);
  CHECK(back.strategy_seed == lat.strategy_seed);
}

TEST_CASE("spectrum cache keyed by operator content") {
  TempDir tmp;
  const Instance inst = make_circle(48, kTau);
  const std::string key = operator_content_hash(inst.op);
  CHECK(key.size() == 16);
  CHECK(operator_content_hash(inst.op) == key);  // stable
  const Instance other = make_circle(48, 5.0);
  CHECK(operator_content_hash(other.op) != key);

  CHECK_FALSE(load_spectrum(inst.space, tmp.path.string(), key).has_value());
  const SpectralDecomposition dec = decompose(inst.op);
  save_spectrum(dec, tmp.path.string(), key);
  const auto cached = load_spectrum(inst.space, tmp.path.string(), key);
  REQUIRE(cached.has_value());
  CHECK((cached->eigenvalues - dec.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cached->eigenvectors - dec.eigenvectors).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("table writer produces stable bytes") {
  TempDir tmp;
  const std::vector<std::string> header{"a", "b"};
  const std::vector<std::vector<double>> rows{{1.0, 2.5}, {3.25, -1e-9}};
  write_table(tmp.file("t1.tsv"), header, rows);
  write_table(tmp.file("t2.tsv"), header, rows);
  const std::string a = slurp(tmp.file("t1.tsv"));
  CHECK(a == slurp(tmp.file("t2.tsv")));
  CHECK(a == "a\tb\n1\t2.5\n3.25\t-1e-09\n");
}

TEST_CASE("config parser") {
  const Config cfg = Config::parse_string(R"(
# comment
[instance]
kind = circle
n = 2048            ; trailing comment
[sweep]
gamma_grid = 0.5 0.25, 0.1
omega_min = 25
[checks]
weyl = on
gaussian = off
)");
  CHECK(cfg.get("instance", "kind") == "circle");
  CHECK(cfg.get_int("instance", "n", 0) == 2048);
  CHECK(cfg.get_double("sweep", "omega_min", 0.0) == 25.0);
  CHECK(cfg.get_list("sweep", "gamma_grid", {}) ==
        std::vector<double>{0.5, 0.25, 0.1});
  CHECK(cfg.get_bool("checks", "weyl", false));
  CHECK_FALSE(cfg.get_bool("checks", "gaussian", true));
  CHECK(cfg.get_bool("checks", "absent", true));
  CHECK_THROWS_AS(Config::parse_string("key_without_equals\n"),
                  ValidationError);
  CHECK_THROWS_AS(Config::parse_string("[unterminated\n"), ValidationError);
}

TEST_CASE("svg writer emits a well-formed plot") {
  TempDir tmp;
  SvgPlot plot("counting", "omega", "N");
  plot.add_series("data", {10.0, 100.0, 1000.0}, {7.0, 21.0, 63.0});
  plot.write(tmp.file("p.svg"));
  const std::string svg = slurp(tmp.file("p.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("counting") != std::string::npos);
}
