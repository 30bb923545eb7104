#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "declab/dyadic.hpp"

namespace declab {

// Admissible scales are R = 2^(4l), K = 2^(4s) with l,s >= 1. Returns l;
// throws ScaleError otherwise.
int scale_log16(std::int64_t R);

// Smallest admissible K = 2^(4s) with K >= log2(R).
std::int64_t auto_K(std::int64_t R);

// One interval of the dyadic one-dimensional decomposition: I_0 = [0,R^-1/4],
// and for k >= 1 the mu-th piece of the block [2^(k-1) R^-1/4, 2^k R^-1/4].
struct DyadicInterval {
  int k = 0;
  int mu = 0;  // 1-based for k >= 1; 0 for I_0
  DInterval iv;
};

enum class SchemeKind { F3_R4, F3_R24, Omega0Caps, Omega1Slabs };

const char* scheme_kind_name(SchemeKind k);

// Frequency rectangle with its dyadic provenance. Slot meaning depends on the
// scheme kind:
//   F3_R4:       p[0..3] = k1, mu1, k2, mu2        (mu = 0 for an I_0 axis)
//   F3_R24:      p[0..2] = a_index, k, mu          (a = a_index * R^-1/2)
//   Omega0Caps:  p[0..3] = t_lam, t_sig, j, m      (lambda = 2^-t_lam)
//   Omega1Slabs: p[0..1] = t_lam, j
struct Cap {
  DRect rect;
  SchemeKind tag;
  std::int64_t p[4] = {0, 0, 0, 0};
};

struct PartitionScheme {
  SchemeKind kind;
  std::int64_t R = 0;  // 0 when the scheme is K-scaled only
  std::int64_t K = 0;
  DRect region;
  std::vector<Cap> caps;

  std::string id() const;
};

std::vector<DyadicInterval> intervals_I(std::int64_t R);

PartitionScheme build_f3_r4(std::int64_t R);
PartitionScheme build_f3_r24(std::int64_t R);

struct OmegaRegions {
  DRect omega0, omega1, omega2, omega3;
};
OmegaRegions omega_regions(std::int64_t K);

PartitionScheme omega0_caps(std::int64_t K);
PartitionScheme omega1_slabs(std::int64_t K);

// Index of the unique cap containing the point; boundary ties resolve to the
// smallest cap index. Throws DomainError outside the scheme region.
std::size_t locate(const PartitionScheme& scheme, Dyadic x, Dyadic y);

// Caps fully contained in rect. Throws AlignmentError if the rect boundary
// cuts through a cap interior.
std::vector<std::size_t> caps_within(const PartitionScheme& scheme,
                                     const DRect& rect);

struct PartitionReport {
  bool covers = false;
  bool disjoint = false;
  Dyadic area_defect;  // area(region) - sum of cap areas, exact
};

// Exact check (dyadic sweep): caps tile the region with disjoint interiors.
PartitionReport verify_partition(const PartitionScheme& scheme);

nlohmann::ordered_json scheme_to_json(const PartitionScheme& scheme);
nlohmann::ordered_json partition_report_to_json(const PartitionReport& r);

}  // namespace declab
