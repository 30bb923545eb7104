#include <doctest.h>

#include "declab/errors.hpp"
#include "declab/partition.hpp"

using namespace declab;

namespace {
Dyadic dy(std::int64_t m, int e) { return Dyadic::make(m, e); }
}  // namespace

TEST_CASE("scale format validation") {
  CHECK(scale_log16(16) == 1);
  CHECK(scale_log16(65536) == 4);
  CHECK_THROWS_AS(scale_log16(15), ScaleError);
  CHECK_THROWS_AS(scale_log16(32), ScaleError);  // 2^5: not 2^(4l)
  CHECK_THROWS_AS(scale_log16(8), ScaleError);
  CHECK(auto_K(256) == 16);     // log2 R = 8 <= 16
  CHECK(auto_K(65536) == 16);   // log2 R = 16 <= 16
  CHECK(auto_K(std::int64_t(1) << 20) == 256);
}

TEST_CASE("intervals_I endpoints per the dyadic construction") {
  SUBCASE("R = 256") {
    auto iv = intervals_I(256);
    REQUIRE(iv.size() == 6);
    CHECK(iv[0].iv.lo == dy(0, 0));
    CHECK(iv[0].iv.hi == dy(1, -2));  // 0.25
    CHECK(iv[1].iv == DInterval{dy(1, -2), dy(1, -1)});
    // I_2 split into 4 pieces of length 1/8
    for (int j = 0; j < 4; ++j) {
      CHECK(iv[2 + j].k == 2);
      CHECK(iv[2 + j].mu == j + 1);
      CHECK(iv[2 + j].iv.lo == dy(4 + j, -3));
      CHECK(iv[2 + j].iv.length() == dy(1, -3));
    }
    CHECK(iv.back().iv.hi == dy(1, 0));
    for (std::size_t i = 0; i + 1 < iv.size(); ++i) {
      CHECK(iv[i].iv.hi == iv[i + 1].iv.lo);  // sorted, abutting
    }
  }
  SUBCASE("R = 16: exactly I_0 and I_1") {
    auto iv = intervals_I(16);
    REQUIRE(iv.size() == 2);
    CHECK(iv[0].iv == DInterval{dy(0, 0), dy(1, -1)});
    CHECK(iv[1].iv == DInterval{dy(1, -1), dy(1, 0)});
  }
  SUBCASE("R = 4096: 1 + 1 + 4 + 16 = 22 intervals") {
    CHECK(intervals_I(4096).size() == 22);
  }
  SUBCASE("rejects bad scales") {
    CHECK_THROWS_AS(intervals_I(100), ScaleError);
    CHECK_THROWS_AS(intervals_I(4), ScaleError);
  }
}

TEST_CASE("F3(R,4) cap counts match the closed form") {
  CHECK(build_f3_r4(16).caps.size() == 4);
  CHECK(build_f3_r4(256).caps.size() == 36);
  CHECK(build_f3_r4(4096).caps.size() == 484);
  CHECK(build_f3_r4(65536).caps.size() == 7396);
}

TEST_CASE("F3(R,2,4) cap counts: grid columns times intervals") {
  CHECK(build_f3_r24(16).caps.size() == 8);      // 4 * 2
  CHECK(build_f3_r24(256).caps.size() == 96);    // 16 * 6
  CHECK(build_f3_r24(4096).caps.size() == 1408);  // 64 * 22
}

TEST_CASE("omega regions tile the unit square") {
  SUBCASE("K = 16") {
    auto r = omega_regions(16);
    CHECK(r.omega3 == make_rect(dy(0, 0), dy(1, -1), dy(0, 0), dy(1, -1)));
    CHECK(r.omega0 == make_rect(dy(1, -1), dy(1, 0), dy(1, -1), dy(1, 0)));
  }
  SUBCASE("K = 256") {
    auto r = omega_regions(256);
    CHECK(r.omega1 == make_rect(dy(1, -2), dy(1, 0), dy(0, 0), dy(1, -2)));
  }
  SUBCASE("complementary rectangles") {
    auto r = omega_regions(256);
    Dyadic total = r.omega0.area() + r.omega1.area() + r.omega2.area() +
                   r.omega3.area();
    CHECK(total == Dyadic::from_int(1));
  }
  CHECK_THROWS_AS(omega_regions(100), ScaleError);
}

TEST_CASE("omega0 caps have the block-adapted dimensions") {
  SUBCASE("K = 16: single half-cap") {
    auto s = omega0_caps(16);
    REQUIRE(s.caps.size() == 1);
    CHECK(s.caps[0].rect == make_rect(dy(1, -1), dy(1, 0), dy(1, -1), dy(1, 0)));
  }
  SUBCASE("K = 256: per-axis count times side equals lambda") {
    auto s = omega0_caps(256);
    // lambda = sigma = 1/4 block: one cap of side 1/4
    bool found = false;
    for (const auto& c : s.caps) {
      if (c.p[0] == 2 && c.p[1] == 2) {
        CHECK(c.rect.x.length() == dy(1, -2));
        CHECK(c.rect.y.length() == dy(1, -2));
        CHECK(c.p[2] == 1);
        CHECK(c.p[3] == 1);
        found = true;
      }
    }
    CHECK(found);
    // per-axis count * side = lambda, for every block
    for (int t = 1; t <= 2; ++t) {
      std::int64_t count = std::int64_t(1) << (2 * 2 - 2 * t);
      Dyadic side = Dyadic::pow2(t - 4);
      CHECK(Dyadic::from_int(count) * side == Dyadic::pow2(-t));
    }
  }
  SUBCASE("caps tile each block") {
    auto s = omega0_caps(256);
    auto rep = verify_partition(s);
    CHECK(rep.covers);
    CHECK(rep.disjoint);
    CHECK(rep.area_defect.is_zero());
  }
}

TEST_CASE("omega1 slabs") {
  SUBCASE("K = 256, lambda = 1/4: one slab") {
    auto s = omega1_slabs(256);
    int n_quarter = 0;
    for (const auto& c : s.caps)
      if (c.p[0] == 2) {
        ++n_quarter;
        CHECK(c.rect == make_rect(dy(1, -2), dy(1, -1), dy(0, 0), dy(1, -2)));
      }
    CHECK(n_quarter == 1);
  }
  SUBCASE("K = 256, lambda = 1/2: four slabs of width 1/8") {
    auto s = omega1_slabs(256);
    int n_half = 0;
    for (const auto& c : s.caps)
      if (c.p[0] == 1) {
        ++n_half;
        CHECK(c.rect.x.length() == dy(1, -3));
      }
    CHECK(n_half == 4);
  }
  SUBCASE("slabs tile omega1") {
    auto rep = verify_partition(omega1_slabs(256));
    CHECK(rep.covers);
    CHECK(rep.disjoint);
  }
}

TEST_CASE("locate resolves points and boundary ties deterministically") {
  auto s = build_f3_r4(256);
  SUBCASE("origin lands in the I0 x I0 cap") {
    std::size_t i = locate(s, dy(0, 0), dy(0, 0));
    CHECK(s.caps[i].p[0] == 0);
    CHECK(s.caps[i].p[2] == 0);
  }
  SUBCASE("point near (0.6, 0.6) lands in I_{2,1} x I_{2,1} = [0.5, 0.625]^2") {
    // 0.6 itself is not dyadic; 19/32 = 0.59375 sits in the same cap.
    std::size_t i = locate(s, dy(19, -5), dy(19, -5));
    CHECK(s.caps[i].rect ==
          make_rect(dy(1, -1), dy(5, -3), dy(1, -1), dy(5, -3)));
  }
  SUBCASE("boundary tie goes to the smaller index") {
    std::size_t i = locate(s, dy(1, -2), dy(29, -5));
    // x = 0.25 is shared between I_0 and I_{1,1}; smallest index wins,
    // which is the I_0 column.
    CHECK(s.caps[i].p[0] == 0);
    std::size_t j = locate(s, dy(1, -2), dy(29, -5));
    CHECK(i == j);
  }
  SUBCASE("outside the region") {
    CHECK_THROWS_AS(locate(s, dy(3, 0), dy(0, 0)), DomainError);
  }
}

TEST_CASE("locate of every cap center returns that cap, every scheme") {
  std::vector<PartitionScheme> schemes;
  schemes.push_back(build_f3_r4(16));
  schemes.push_back(build_f3_r4(256));
  schemes.push_back(build_f3_r24(256));
  schemes.push_back(omega0_caps(256));
  schemes.push_back(omega1_slabs(256));
  for (const auto& s : schemes) {
    for (std::size_t i = 0; i < s.caps.size(); ++i) {
      Dyadic cx = (s.caps[i].rect.x.lo + s.caps[i].rect.x.hi) * dy(1, -1);
      Dyadic cy = (s.caps[i].rect.y.lo + s.caps[i].rect.y.hi) * dy(1, -1);
      CHECK(locate(s, cx, cy) == i);
    }
  }
}

TEST_CASE("caps_within") {
  auto s = build_f3_r4(256);
  SUBCASE("whole region returns all caps") {
    CHECK(caps_within(s, s.region).size() == s.caps.size());
  }
  SUBCASE("omega3 for K=16 selects the I0/I1 product caps") {
    DRect om3 = make_rect(dy(0, 0), dy(1, -1), dy(0, 0), dy(1, -1));
    auto sel = caps_within(s, om3);
    // Both axes in I_0 u I_{1,1} = [0, 1/2]: 2 x 2 caps.
    CHECK(sel.size() == 4);
    for (auto i : sel) {
      CHECK(s.caps[i].rect.x.hi <= dy(1, -1));
      CHECK(s.caps[i].rect.y.hi <= dy(1, -1));
    }
  }
  SUBCASE("misaligned rect raises an alignment error") {
    // Shift by a quarter of the finest cap width: boundary cuts caps.
    Dyadic shift = dy(1, -6);
    DRect bad = make_rect(shift, dy(1, -1) + shift, dy(0, 0), dy(1, -1));
    CHECK_THROWS_AS(caps_within(s, bad), AlignmentError);
  }
}

TEST_CASE("verify_partition exactness") {
  for (std::int64_t R : {std::int64_t(16), std::int64_t(256),
                         std::int64_t(4096), std::int64_t(65536)}) {
    auto rep4 = verify_partition(build_f3_r4(R));
    CHECK(rep4.covers);
    CHECK(rep4.disjoint);
    CHECK(rep4.area_defect.is_zero());
    auto rep24 = verify_partition(build_f3_r24(R));
    CHECK(rep24.covers);
    CHECK(rep24.disjoint);
    CHECK(rep24.area_defect.is_zero());
  }
}

TEST_CASE("verify_partition flags a removed cap") {
  auto s = build_f3_r4(256);
  Dyadic removed_area = s.caps[7].rect.area();
  s.caps.erase(s.caps.begin() + 7);
  auto rep = verify_partition(s);
  CHECK(!rep.covers);
  CHECK(rep.disjoint);
  CHECK(rep.area_defect == removed_area);
}

TEST_CASE("single-cap scheme verifies") {
  PartitionScheme s;
  s.kind = SchemeKind::F3_R4;
  s.region = unit_square();
  Cap c;
  c.rect = unit_square();
  c.tag = SchemeKind::F3_R4;
  s.caps.push_back(c);
  auto rep = verify_partition(s);
  CHECK(rep.covers);
  CHECK(rep.disjoint);
  CHECK(rep.area_defect.is_zero());
}

TEST_CASE("block scaling identity for F3(R,4) caps away from the axes") {
  for (std::int64_t R : {std::int64_t(256), std::int64_t(4096)}) {
    const int l = scale_log16(R);
    auto s = build_f3_r4(R);
    for (const auto& c : s.caps) {
      if (c.p[0] < 1) continue;
      // side1 * (left endpoint of the parent block) = R^{-1/2} exactly
      Dyadic block_lo = Dyadic::pow2(int(c.p[0]) - 1 - l);
      CHECK(c.rect.x.length() * block_lo == Dyadic::pow2(-2 * l));
    }
  }
}

TEST_CASE("omega decompositions tile the unit square together") {
  const std::int64_t K = 256;
  auto om0 = omega0_caps(K);
  auto om1 = omega1_slabs(K);
  auto regions = omega_regions(K);
  Dyadic total = regions.omega3.area();
  for (const auto& c : om0.caps) total = total + c.rect.area();
  for (const auto& c : om1.caps) total = total + c.rect.area();  // omega1
  for (const auto& c : om1.caps) total = total + c.rect.area();  // transpose
  CHECK(total == Dyadic::from_int(1));
}

TEST_CASE("scheme JSON carries exact endpoints") {
  auto s = build_f3_r4(16);
  auto j = scheme_to_json(s);
  CHECK(j["kind"] == "f3_r4");
  CHECK(j["R"] == 16);
  CHECK(j["caps"].size() == 4);
  CHECK(j["caps"][0]["a1"] == "0/2^0");
  CHECK(j["caps"][0]["b1"] == "1/2^1");
}
