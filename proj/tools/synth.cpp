#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "likert_miner/dataset.hpp"
#include "likert_miner/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Writes a synthetic course-evaluation CSV"};
  std::size_t n = 2000;
  std::uint64_t seed = 7;
  std::string out;
  app.add_option("-n,--rows", n, "number of respondents")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("-o,--out", out, "output path (stdout when omitted)");
  CLI11_PARSE(app, argc, argv);

  const auto ds = likert::synthetic_survey(n, seed);
  if (out.empty()) {
    likert::write_csv(std::cout, ds);
    return 0;
  }
  std::ofstream file(out);
  if (!file) {
    std::cerr << "cannot write " << out << "\n";
    return 1;
  }
  likert::write_csv(file, ds);
  return 0;
}
