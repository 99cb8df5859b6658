#include "ctqw/io.hpp"

#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include <gtest/gtest.h>

#include "ctqw/error.hpp"

using namespace ctqw;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ctqw_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(4.16), "4.16");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(4.425262451437), "4.42526245144");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(-2.5), "-2.5");
}

TEST(FormatNumber, LocaleIndependent) {
  struct Comma : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
  };
  const auto previous = std::locale::global(std::locale(std::locale::classic(), new Comma));
  EXPECT_EQ(format_number(0.5), "0.5");
  std::locale::global(previous);
}

TEST(Csv, CurvesLayout) {
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const auto s = run_search(build_paper31(), TargetSpec::center(), 4.16, grid);
  const auto csv = curves_csv(s);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "gamma_t,p_quantum_target,p_classical_target,ratio");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.0322580645161,0.0322580645161,1");
  int rows = 1;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(Csv, ScalingLayout) {
  ScalingRecord r{7, 1, {TargetKind::FirstNeighbor, 0}, 4.0, 0.5, 2.0, 0.4, 0.2};
  const std::vector<ScalingRecord> records{r};
  EXPECT_EQ(scaling_csv(records),
            "n,layers,target,beta_over_gamma,t_opt,r_opt,pq_opt,pc_opt\n"
            "7,1,1N,4,0.5,2,0.4,0.2\n");
}

TEST(Csv, HeatmapDistributionMatrix) {
  const std::vector<double> betas{0.0, 1.0};
  const std::vector<double> times{0.0, 0.5};
  Eigen::MatrixXd m(2, 2);
  m << 0.25, 0.5, 0.75, 1.0;
  EXPECT_EQ(heatmap_csv(betas, times, m),
            "beta_over_gamma,gamma_t,p_quantum_target\n0,0,0.25\n0,0.5,0.5\n1,0,0.75\n1,0.5,1\n");
  EXPECT_EQ(matrix_csv(m), "0.25,0.5\n0.75,1\n");
  const auto g = build_from_coords({{0, 0}, {1, 0}});
  EXPECT_EQ(distribution_csv(g, Eigen::Vector2d(0.5, 0.5)), "site,i,j,probability\n0,0,0,0.5\n1,1,0,0.5\n");
}

TEST(AtomicWrite, ReplacesAndLeavesNoTemporaries) {
  const auto dir = scratch_dir("atomic");
  const auto target = dir / "out.csv";
  write_file_atomic(target, "first\n");
  write_file_atomic(target, "second\n");
  EXPECT_EQ(slurp(target), "second\n");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}

TEST(AtomicWrite, FailureKeepsExistingFile) {
  const auto dir = scratch_dir("fail");
  try {
    write_file_atomic(dir / "missing" / "out.csv", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
  // Renaming onto a directory fails after the temporary was written.
  fs::create_directories(dir / "blocker" / "child");
  EXPECT_THROW(write_file_atomic(dir / "blocker", "x"), Error);
  EXPECT_TRUE(fs::is_directory(dir / "blocker"));
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}

TEST(Pgm, RoundTripAndHeader) {
  RasterImage img;
  img.width = 3;
  img.height = 2;
  img.pixels = {0, 1, 256, 65535, 4660, 43981};
  const auto bytes = encode_pgm(img, "graph_id=paper31 gamma_t=0.5 target=C");
  EXPECT_EQ(bytes.substr(0, bytes.find("65535\n") + 6),
            "P5\n# graph_id=paper31 gamma_t=0.5 target=C\n3 2\n65535\n");
  EXPECT_EQ(bytes.size(), bytes.find("65535\n") + 6 + 12);
  // Big-endian samples.
  const auto raster = bytes.substr(bytes.size() - 12);
  EXPECT_EQ(static_cast<unsigned char>(raster[4]), 0x01);
  EXPECT_EQ(static_cast<unsigned char>(raster[5]), 0x00);
  const auto back = decode_pgm(bytes);
  EXPECT_EQ(back.width, 3);
  EXPECT_EQ(back.height, 2);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_THROW(decode_pgm("P2\n1 1\n255\n0"), Error);
  EXPECT_THROW(decode_pgm(bytes.substr(0, bytes.size() - 1)), Error);
}

TEST(Pgm, CommentCannotBreakHeader) {
  RasterImage img{1, 1, {7}};
  const auto back = decode_pgm(encode_pgm(img, "line one\nline two"));
  EXPECT_EQ(back.pixels, img.pixels);
}
