#include "declab/partition.hpp"

#include <algorithm>
#include <map>

#include "declab/errors.hpp"

namespace declab {

int scale_log16(std::int64_t R) {
  if (R < 16 || (R & (R - 1)) != 0)
    throw ScaleError("scale must be 2^(4l) with l >= 1, got " +
                     std::to_string(R));
  int e = 0;
  while ((R >> e) != 1) ++e;
  if (e % 4 != 0)
    throw ScaleError("scale must be 2^(4l) with l >= 1, got 2^" +
                     std::to_string(e));
  return e / 4;
}

std::int64_t auto_K(std::int64_t R) {
  int l = scale_log16(R);
  double need = 4.0 * l;  // log2(R)
  std::int64_t K = 16;
  while (double(K) < need) K *= 16;
  return K;
}

const char* scheme_kind_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::F3_R4:
      return "f3_r4";
    case SchemeKind::F3_R24:
      return "f3_r24";
    case SchemeKind::Omega0Caps:
      return "omega0_caps";
    default:
      return "omega1_slabs";
  }
}

std::string PartitionScheme::id() const {
  std::string s = scheme_kind_name(kind);
  if (R != 0) s += ":R=" + std::to_string(R);
  if (K != 0) s += ":K=" + std::to_string(K);
  return s;
}

std::vector<DyadicInterval> intervals_I(std::int64_t R) {
  const int l = scale_log16(R);
  std::vector<DyadicInterval> out;
  out.push_back({0, 0, {Dyadic::from_int(0), Dyadic::pow2(-l)}});
  for (int k = 1; k <= l; ++k) {
    const Dyadic block_lo = Dyadic::pow2(k - 1 - l);
    const Dyadic width = Dyadic::pow2(-(k - 1) - l);
    const std::int64_t pieces = std::int64_t(1) << (2 * (k - 1));
    for (std::int64_t mu = 1; mu <= pieces; ++mu) {
      Dyadic lo = block_lo + Dyadic::from_int(mu - 1) * width;
      out.push_back({k, int(mu), {lo, lo + width}});
    }
  }
  return out;
}

PartitionScheme build_f3_r4(std::int64_t R) {
  auto iv = intervals_I(R);
  PartitionScheme s;
  s.kind = SchemeKind::F3_R4;
  s.R = R;
  s.region = unit_square();
  s.caps.reserve(iv.size() * iv.size());
  for (const auto& a : iv)
    for (const auto& b : iv) {
      Cap c;
      c.rect = DRect{a.iv, b.iv};
      c.tag = SchemeKind::F3_R4;
      c.p[0] = a.k;
      c.p[1] = a.mu;
      c.p[2] = b.k;
      c.p[3] = b.mu;
      s.caps.push_back(c);
    }
  return s;
}

PartitionScheme build_f3_r24(std::int64_t R) {
  const int l = scale_log16(R);
  auto iv = intervals_I(R);
  PartitionScheme s;
  s.kind = SchemeKind::F3_R24;
  s.R = R;
  s.region = unit_square();
  const Dyadic w = Dyadic::pow2(-2 * l);  // R^{-1/2}
  const std::int64_t cols = std::int64_t(1) << (2 * l);
  s.caps.reserve(std::size_t(cols) * iv.size());
  for (std::int64_t a = 0; a < cols; ++a) {
    Dyadic lo = Dyadic::from_int(a) * w;
    for (const auto& b : iv) {
      Cap c;
      c.rect = DRect{{lo, lo + w}, b.iv};
      c.tag = SchemeKind::F3_R24;
      c.p[0] = a;
      c.p[1] = b.k;
      c.p[2] = b.mu;
      s.caps.push_back(c);
    }
  }
  return s;
}

OmegaRegions omega_regions(std::int64_t K) {
  const int sq = scale_log16(K);
  const Dyadic cut = Dyadic::pow2(-sq);  // K^{-1/4}
  const Dyadic zero = Dyadic::from_int(0);
  const Dyadic one = Dyadic::from_int(1);
  OmegaRegions r;
  r.omega0 = make_rect(cut, one, cut, one);
  r.omega1 = make_rect(cut, one, zero, cut);
  r.omega2 = make_rect(zero, cut, cut, one);
  r.omega3 = make_rect(zero, cut, zero, cut);
  return r;
}

PartitionScheme omega0_caps(std::int64_t K) {
  const int sq = scale_log16(K);
  PartitionScheme s;
  s.kind = SchemeKind::Omega0Caps;
  s.K = K;
  s.region = omega_regions(K).omega0;
  // lambda = 2^-t ranges over [K^-1/4, 1/2]; per-axis count lambda^2 K^1/2.
  for (int tl = sq; tl >= 1; --tl) {
    const Dyadic lam = Dyadic::pow2(-tl);
    const Dyadic wl = Dyadic::pow2(tl - 2 * sq);  // lambda^-1 K^-1/2
    const std::int64_t nl = std::int64_t(1) << (2 * sq - 2 * tl);
    for (int ts = sq; ts >= 1; --ts) {
      const Dyadic sig = Dyadic::pow2(-ts);
      const Dyadic ws = Dyadic::pow2(ts - 2 * sq);
      const std::int64_t ns = std::int64_t(1) << (2 * sq - 2 * ts);
      for (std::int64_t j = 1; j <= nl; ++j)
        for (std::int64_t m = 1; m <= ns; ++m) {
          Cap c;
          Dyadic x0 = lam + Dyadic::from_int(j - 1) * wl;
          Dyadic y0 = sig + Dyadic::from_int(m - 1) * ws;
          c.rect = make_rect(x0, x0 + wl, y0, y0 + ws);
          c.tag = SchemeKind::Omega0Caps;
          c.p[0] = tl;
          c.p[1] = ts;
          c.p[2] = j;
          c.p[3] = m;
          s.caps.push_back(c);
        }
    }
  }
  return s;
}

PartitionScheme omega1_slabs(std::int64_t K) {
  const int sq = scale_log16(K);
  PartitionScheme s;
  s.kind = SchemeKind::Omega1Slabs;
  s.K = K;
  s.region = omega_regions(K).omega1;
  const Dyadic cut = Dyadic::pow2(-sq);
  const Dyadic zero = Dyadic::from_int(0);
  for (int tl = sq; tl >= 1; --tl) {
    const Dyadic lam = Dyadic::pow2(-tl);
    const Dyadic wl = Dyadic::pow2(tl - 2 * sq);
    const std::int64_t nl = std::int64_t(1) << (2 * sq - 2 * tl);
    for (std::int64_t j = 1; j <= nl; ++j) {
      Cap c;
      Dyadic x0 = lam + Dyadic::from_int(j - 1) * wl;
      c.rect = make_rect(x0, x0 + wl, zero, cut);
      c.tag = SchemeKind::Omega1Slabs;
      c.p[0] = tl;
      c.p[1] = j;
      s.caps.push_back(c);
    }
  }
  return s;
}

std::size_t locate(const PartitionScheme& scheme, Dyadic x, Dyadic y) {
  if (!scheme.region.contains_point(x, y))
    throw DomainError("point outside scheme region");
  for (std::size_t i = 0; i < scheme.caps.size(); ++i)
    if (scheme.caps[i].rect.contains_point(x, y)) return i;
  throw DomainError("point not covered by any cap");
}

std::vector<std::size_t> caps_within(const PartitionScheme& scheme,
                                     const DRect& rect) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scheme.caps.size(); ++i) {
    const DRect& r = scheme.caps[i].rect;
    if (rect.contains(r)) {
      out.push_back(i);
    } else if (rect.interior_intersects(r)) {
      throw AlignmentError("query rect boundary cuts cap " +
                           std::to_string(i));
    }
  }
  return out;
}

PartitionReport verify_partition(const PartitionScheme& scheme) {
  PartitionReport rep;
  rep.disjoint = true;
  bool inside = true;
  Dyadic total;
  for (const auto& c : scheme.caps) {
    total = total + c.rect.area();
    if (!scheme.region.contains(c.rect)) inside = false;
  }
  rep.area_defect = scheme.region.area() - total;

  // Strip sweep: between consecutive x-endpoints, the y-intervals of the caps
  // spanning the strip must tile the region's y-extent with no overlap.
  std::vector<Dyadic> xs;
  xs.push_back(scheme.region.x.lo);
  xs.push_back(scheme.region.x.hi);
  for (const auto& c : scheme.caps) {
    xs.push_back(c.rect.x.lo);
    xs.push_back(c.rect.x.hi);
  }
  std::sort(xs.begin(), xs.end(), [](Dyadic a, Dyadic b) { return a < b; });
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  bool covers = inside;
  for (std::size_t si = 0; si + 1 < xs.size(); ++si) {
    Dyadic xa = xs[si], xb = xs[si + 1];
    if (!(scheme.region.x.lo <= xa && xb <= scheme.region.x.hi)) {
      covers = false;
      continue;
    }
    std::vector<DInterval> ys;
    for (const auto& c : scheme.caps)
      if (c.rect.x.lo <= xa && xb <= c.rect.x.hi) ys.push_back(c.rect.y);
    std::sort(ys.begin(), ys.end(), [](const DInterval& a, const DInterval& b) {
      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    Dyadic cursor = scheme.region.y.lo;
    for (const auto& yiv : ys) {
      if (yiv.lo < cursor) rep.disjoint = false;
      if (cursor < yiv.lo) covers = false;
      if (cursor < yiv.hi) cursor = yiv.hi;
    }
    if (cursor != scheme.region.y.hi) covers = false;
  }
  rep.covers = covers && rep.disjoint && rep.area_defect.is_zero();
  return rep;
}

namespace {

nlohmann::ordered_json cap_params_json(const Cap& c) {
  nlohmann::ordered_json p;
  switch (c.tag) {
    case SchemeKind::F3_R4:
      p["k1"] = c.p[0];
      p["mu1"] = c.p[1];
      p["k2"] = c.p[2];
      p["mu2"] = c.p[3];
      break;
    case SchemeKind::F3_R24:
      p["a_index"] = c.p[0];
      p["k"] = c.p[1];
      p["mu"] = c.p[2];
      break;
    case SchemeKind::Omega0Caps:
      p["lambda"] = Dyadic::pow2(-int(c.p[0])).to_frac_string();
      p["sigma"] = Dyadic::pow2(-int(c.p[1])).to_frac_string();
      p["j"] = c.p[2];
      p["m"] = c.p[3];
      break;
    case SchemeKind::Omega1Slabs:
      p["lambda"] = Dyadic::pow2(-int(c.p[0])).to_frac_string();
      p["j"] = c.p[1];
      break;
  }
  return p;
}

}  // namespace

nlohmann::ordered_json scheme_to_json(const PartitionScheme& scheme) {
  nlohmann::ordered_json j;
  j["kind"] = scheme_kind_name(scheme.kind);
  if (scheme.R != 0) j["R"] = scheme.R;
  if (scheme.K != 0) j["K"] = scheme.K;
  j["region"] = {
      {"a1", scheme.region.x.lo.to_frac_string()},
      {"b1", scheme.region.x.hi.to_frac_string()},
      {"a2", scheme.region.y.lo.to_frac_string()},
      {"b2", scheme.region.y.hi.to_frac_string()},
  };
  auto caps = nlohmann::ordered_json::array();
  for (const auto& c : scheme.caps) {
    nlohmann::ordered_json cj;
    cj["a1"] = c.rect.x.lo.to_frac_string();
    cj["b1"] = c.rect.x.hi.to_frac_string();
    cj["a2"] = c.rect.y.lo.to_frac_string();
    cj["b2"] = c.rect.y.hi.to_frac_string();
    cj["params"] = cap_params_json(c);
    caps.push_back(cj);
  }
  j["caps"] = std::move(caps);
  return j;
}

nlohmann::ordered_json partition_report_to_json(const PartitionReport& r) {
  nlohmann::ordered_json j;
  j["covers"] = r.covers;
  j["disjoint"] = r.disjoint;
  j["area_defect"] = r.area_defect.to_frac_string();
  return j;
}

}  // namespace declab
