// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "criteria.hpp"

using namespace vxt::testing;

namespace {

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string fixtures = argc > 1 ? argv[1] : VXT_FIXTURES;
  const std::vector<Criterion> criteria{
      {1, "root menu and back handler", 1.0, [&] { return check_root_menu(fixtures); }},
      {2, "level rendering", 1.0, [&] { return check_level_rendering(fixtures); }},
      {3, "promoted back", 1.0, [&] { return check_promoted_back(fixtures); }},
      {4, "record readout", 1.0, [&] { return check_record_readout(fixtures); }},
      {5, "headline numbering", 1.0, [&] { return check_headline_numbering(fixtures); }},
      {6, "back coverage", 60.0, [] { return check_back_coverage(20021, 200); }},
      {7, "round trip and determinism", 60.0, [] { return check_round_trip(7, 500); }},
      {8, "extraction golden", 1.0, [&] { return check_extraction_golden(fixtures); }},
      {9, "stack oracle agreement", 30.0, [] { return check_oracle_walks(99, 100, 100); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.pass && secs > c.limit_seconds) v.fail("took longer than the limit");
    failures += !v.pass;
    std::printf("%s  %d  %-28s %8.3fs (limit %gs)  %s\n", v.pass ? "PASS" : "FAIL", c.number, c.name, secs,
                c.limit_seconds, v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
