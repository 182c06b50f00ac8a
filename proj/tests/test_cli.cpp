#include <doctest.h>

#include <sstream>

#include "hodgedirac/cli.hpp"
#include "hodgedirac/io.hpp"
#include "test_support.hpp"

using namespace hodgedirac;
using testsupport::TempDir;

TEST_CASE("mesh subcommand round-trips through the text format") {
  TempDir dir;
  RunConfig config;
  config.subcommand = "mesh";
  config.domain = Domain::Disk;
  config.resolution = 2;
  config.out_path = dir.file("disk.txt");
  REQUIRE(run(config) == 0);

  const SimplicialMesh mesh = read_mesh_file(config.out_path);
  CHECK(mesh.vertex_count() == 19);
  CHECK(mesh.triangle_count() == 24);

  // Re-writing the parsed mesh is byte-identical.
  std::ostringstream rewritten;
  write_mesh(rewritten, mesh);
  CHECK(rewritten.str() == testsupport::read_file(config.out_path));
}

TEST_CASE("mesh file comments and whitespace are tolerated") {
  TempDir dir;
  const std::string path = dir.file("tri.txt");
  {
    std::ofstream out(path);
    out << "# a single triangle\nmesh2d 3 3 1\n0 0\n1 0  # third vertex follows\n0 1\n"
        << "0 1\n0 2\n1 2\n\n0 1 2\n";
  }
  const SimplicialMesh mesh = read_mesh_file(path);
  CHECK(mesh.vertex_count() == 3);
  CHECK(mesh.edge_count() == 3);
  CHECK(mesh.triangle_count() == 1);
}

TEST_CASE("solve-dirac writes a valid deterministic VTK file") {
  TempDir dir;
  RunConfig config;
  config.subcommand = "solve-dirac";
  config.domain = Domain::Square;
  config.resolution = 3;
  config.f0 = "x-y";
  config.f2 = "x*y";
  config.out_path = dir.file("a.vtk");
  REQUIRE(run(config) == 0);
  CHECK(testsupport::check_vtk(config.out_path) == std::nullopt);

  config.out_path = dir.file("b.vtk");
  REQUIRE(run(config) == 0);
  CHECK(testsupport::read_file(dir.file("a.vtk")) == testsupport::read_file(dir.file("b.vtk")));
}

TEST_CASE("solve-laplace honors --via-dirac") {
  TempDir dir;
  RunConfig config;
  config.subcommand = "solve-laplace";
  config.domain = Domain::Disk;
  config.resolution = 2;
  config.f2 = "x*y";
  config.out_path = dir.file("mixed.vtk");
  REQUIRE(run(config) == 0);

  RunConfig via = config;
  via.via_dirac = true;
  via.out_path = dir.file("via.vtk");
  REQUIRE(run(via) == 0);
  CHECK(testsupport::check_vtk(via.out_path) == std::nullopt);
}

TEST_CASE("decompose writes the three parts") {
  TempDir dir;
  RunConfig config;
  config.subcommand = "decompose";
  config.domain = Domain::Annulus;
  config.resolution = 2;
  config.f1x = "0-y";
  config.f1y = "x";
  config.out_path = dir.file("parts.vtk");
  REQUIRE(run(config) == 0);
  CHECK(testsupport::check_vtk(config.out_path) == std::nullopt);
  const std::string content = testsupport::read_file(config.out_path);
  CHECK(content.find("b_part1") != std::string::npos);
  CHECK(content.find("h_part1") != std::string::npos);
  CHECK(content.find("bstar_part1") != std::string::npos);
}

TEST_CASE("convergence subcommand emits the CSV report") {
  TempDir dir;
  RunConfig config;
  config.subcommand = "convergence";
  config.domain = Domain::Square;
  config.levels = 3;
  config.problem = "smooth1";
  config.out_path = dir.file("conv.csv");
  REQUIRE(run(config) == 0);

  const std::string csv = testsupport::read_file(config.out_path);
  CHECK(csv.rfind("h,errW_u,errV_u,err_du,err_p,err_Bpart,err_Bstarpart\n", 0) == 0);
  CHECK(csv.find("\nrates,") != std::string::npos);

  // Trailer rate for the V-norm error sits in the first-order window.
  const size_t rates_at = csv.find("\nrates,");
  std::istringstream tail(csv.substr(rates_at + 7));
  std::string field;
  std::getline(tail, field, ',');  // errW rate
  std::getline(tail, field, ',');  // errV rate
  const double errv_rate = std::stod(field);
  CHECK(errv_rate >= 0.8);
  CHECK(errv_rate <= 1.2);
}

TEST_CASE("demo-disk emits two VTK files") {
  TempDir dir;
  RunConfig config;
  config.subcommand = "demo-disk";
  config.resolution = 4;
  config.out_path = dir.file("demo");
  REQUIRE(run(config) == 0);
  CHECK(testsupport::check_vtk(dir.file("demo_natural.vtk")) == std::nullopt);
  CHECK(testsupport::check_vtk(dir.file("demo_essential.vtk")) == std::nullopt);
}

TEST_CASE("external meshes solve end to end") {
  TempDir dir;
  RunConfig meshgen;
  meshgen.subcommand = "mesh";
  meshgen.domain = Domain::Square;
  meshgen.resolution = 3;
  meshgen.out_path = dir.file("square.txt");
  REQUIRE(run(meshgen) == 0);

  RunConfig solve;
  solve.subcommand = "solve-dirac";
  solve.mesh_path = dir.file("square.txt");
  solve.f2 = "x*y";
  solve.out_path = dir.file("ext.vtk");
  REQUIRE(run(solve) == 0);
  CHECK(testsupport::check_vtk(solve.out_path) == std::nullopt);
}

TEST_CASE("failure classes map to exit codes") {
  TempDir dir;

  RunConfig bad_expr;
  bad_expr.subcommand = "solve-dirac";
  bad_expr.resolution = 1;
  bad_expr.f0 = "sin(";
  bad_expr.out_path = dir.file("x.vtk");
  CHECK(run(bad_expr) == 2);

  RunConfig bad_levels;
  bad_levels.subcommand = "convergence";
  bad_levels.levels = 1;
  bad_levels.out_path = dir.file("x.csv");
  CHECK(run(bad_levels) == 2);

  RunConfig missing_mesh;
  missing_mesh.subcommand = "solve-dirac";
  missing_mesh.mesh_path = dir.file("nonexistent.txt");
  missing_mesh.out_path = dir.file("x.vtk");
  CHECK(run(missing_mesh) == 5);

  // A mesh file with a degenerate triangle trips the mesh class.
  {
    std::ofstream out(dir.file("bad.txt"));
    out << "mesh2d 3 3 1\n0 0\n1 0\n2 0\n0 1\n0 2\n1 2\n0 1 2\n";
  }
  RunConfig degenerate;
  degenerate.subcommand = "solve-dirac";
  degenerate.mesh_path = dir.file("bad.txt");
  degenerate.out_path = dir.file("x.vtk");
  CHECK(run(degenerate) == 3);

  RunConfig unknown;
  unknown.subcommand = "florp";
  CHECK(run(unknown) == 2);
}

TEST_CASE("the installed binary runs end to end") {
  if (testsupport::cli_binary().empty()) return;  // only under ctest
  TempDir dir;

  CHECK(testsupport::run_cli("mesh --domain square --resolution 2 --out " + dir.file("m.txt")) == 0);
  CHECK(read_mesh_file(dir.file("m.txt")).vertex_count() == 9);

  const std::string out = dir.file("constants.txt");
  CHECK(testsupport::run_cli("constants --domain square --resolution 2", out) == 0);
  std::istringstream stream(testsupport::read_file(out));
  std::string name;
  double c_p = 0.0, gamma = 0.0;
  stream >> name >> c_p;
  CHECK(name == "c_P");
  stream >> name >> gamma;
  CHECK(name == "gamma_h");
  CHECK(c_p >= 1.0);
  CHECK(gamma > 0.0);

  CHECK(testsupport::run_cli("solve-dirac --domain nowhere", "/dev/null", "/dev/null") != 0);
}
