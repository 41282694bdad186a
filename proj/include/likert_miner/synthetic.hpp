#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "random.hpp"

namespace likert {

/// Survey with the shape of a course-evaluation export: 28 items in a
/// course block (Q1..Q12) and an instructor block (Q13..Q28), 3 instructors,
/// 13 courses and roughly half single-minded respondents. Used for demos and
/// tests when no real export is at hand.
inline EvaluationDataset synthetic_survey(std::size_t n, std::uint64_t seed, std::size_t p = 28) {
  Rng rng(seed);
  auto normal = [&] {
    const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  };
  auto clamp_level = [](double v) { return static_cast<int>(std::clamp(std::lround(v), 1L, 5L)); };
  const std::size_t split = std::max<std::size_t>(1, p * 12 / 28);

  std::vector<std::vector<int>> rows(n, std::vector<int>(p));
  Metadata meta;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const int instr = u < 0.133 ? 1 : (u < 0.381 ? 2 : 3);
    const int first_course = instr == 1 ? 1 : (instr == 2 ? 3 : 7);
    const int courses = instr == 1 ? 2 : (instr == 2 ? 4 : 7);
    meta.instructor.push_back(instr);
    meta.course.push_back(first_course + static_cast<int>(rng.below(courses)));
    meta.repetitions.push_back(1 + static_cast<int>(rng.below(3) == 0 ? rng.below(3) : 0));

    const double g = rng.uniform();
    const double centre = g < 0.17 ? 1.5 : (g < 0.41 ? 3.0 : 4.6);
    const bool single_minded = rng.uniform() < (instr == 3 ? 0.53 : 0.45);
    meta.attendance.push_back(std::clamp(static_cast<int>(std::lround(centre - 1.5 + normal())), 0, 4));
    meta.difficulty.push_back(std::clamp(static_cast<int>(std::lround(centre - 0.5 + 0.8 * normal())), 1, 5));

    if (single_minded) {
      const int level = clamp_level(centre + 0.5 * normal());
      std::fill(rows[i].begin(), rows[i].end(), level);
      continue;
    }
    const double course_factor = 0.6 * normal(), instructor_factor = 0.6 * normal();
    for (std::size_t j = 0; j < p; ++j)
      rows[i][j] = clamp_level(centre + (j < split ? course_factor : instructor_factor) + 0.45 * normal());
  }
  return EvaluationDataset(LikertMatrix::from_rows(LikertMatrix::default_names(p), rows), meta);
}

}  // namespace likert
