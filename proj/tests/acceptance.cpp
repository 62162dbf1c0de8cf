// One PASS/FAIL line per acceptance criterion.
//
//   acceptance                 run all
//   acceptance example1 ...    run the named ones
//
// Exit status is 1 if any selected criterion fails.

#include <iostream>
#include <map>

#include "criteria.hpp"

using namespace elscat::criteria;

int main(int argc, char** argv) {
  struct Criterion {
    double limit;
    Outcome (*run)();
  };
  const std::vector<std::pair<std::string, Criterion>> all = {
      {"symbol_determinant", {1.0, [] { return symbol_determinant(); }}},
      {"invertibility_table", {1.0, invertibility_table}},
      {"frechet_slope", {120.0, frechet_slope}},
      {"zero_contrast", {30.0, zero_contrast}},
      {"quadrature_derivative", {10.0, quadrature_derivative}},
      {"noise_model", {1.0, noise_model}},
      {"eshelby_uniform", {60.0, eshelby_uniform}},
      {"example1", {1200.0, example1}},
      {"example2", {1200.0, example2}},
  };
  std::vector<std::string> names;
  for (int i = 1; i < argc; ++i) names.emplace_back(argv[i]);
  if (names.empty())
    for (const auto& [n, c] : all) names.push_back(n);

  bool ok = true;
  for (const auto& name : names) {
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& p) { return p.first == name; });
    if (it == all.end()) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 2;
    }
    Outcome o;
    try {
      o = timed(it->second.limit, it->second.run);
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << format(" [%.1f s]", o.seconds) << std::endl;
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
