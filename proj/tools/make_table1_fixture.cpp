// Writes the committed 1,769-row fixture whose sample moments reproduce the
// moments backed out of the Table 1 bounds.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "pocsel/random.hpp"

namespace {

struct Row {
  int y;  // -1 = missing
  int s;
  int d;
};

void append(std::vector<Row>& rows, std::size_t count, Row r) { rows.insert(rows.end(), count, r); }

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_table1_fixture OUT.csv\n";
    return 2;
  }
  constexpr std::size_t n_d1 = 888, s1_d1 = 537, y1_s1_d1 = 205;
  constexpr std::size_t n_d0 = 881, s1_d0 = 483, y0_s1_d0 = 334;
  constexpr int kCourses = 6;

  std::vector<Row> rows;
  append(rows, y1_s1_d1, {1, 1, 1});
  append(rows, s1_d1 - y1_s1_d1, {0, 1, 1});
  append(rows, n_d1 - s1_d1, {-1, 0, 1});
  append(rows, y0_s1_d0, {0, 1, 0});
  append(rows, s1_d0 - y0_s1_d0, {1, 1, 0});
  append(rows, n_d0 - s1_d0, {-1, 0, 0});

  pocsel::Rng rng(20230401);
  for (std::size_t i = rows.size() - 1; i > 0; --i) {
    std::swap(rows[i], rows[pocsel::uniform_index(rng, i + 1)]);
  }

  std::ofstream out(argv[1], std::ios::binary);
  out << "id,y,s,d,course\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    out << i + 1 << ',' << (r.y < 0 ? std::string() : std::to_string(r.y)) << ',' << r.s << ',' << r.d
        << ",course_" << (i % kCourses) + 1 << '\n';
  }
  return out ? 0 : 1;
}
