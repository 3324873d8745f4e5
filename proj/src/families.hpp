#pragma once

#include <optional>

#include "point_set.hpp"

namespace alab {

enum class FamilyKind { PolySpiral, LogSpiral, Cantor, SequenceSet };

/// Parameterised example set. `parameter` is a (poly spiral), c (log
/// spiral), the contraction ratio (Cantor) or p (sequence {m^-p}).
/// `truncation` is xMax, xMax, depth or mMax respectively.
struct FamilySpec {
  FamilyKind kind = FamilyKind::PolySpiral;
  double parameter = 1.0;
  double truncation = 0.0;
  /// Required for spirals; Cantor and sequence sets default to their
  /// natural resolution (ratio^depth, mMax^-p).
  std::optional<double> target_resolution;
  /// Spirals only: the sample also stays dense at the target resolution
  /// after radial_stretch(stretch_grade).
  double stretch_grade = 1.0;
};

/// Polynomial and logarithmic spirals are sampled with consecutive points
/// at most resolution/2 apart in arc length, from x = 1 (poly) or x = 0
/// (log) to xMax, plus the origin. A tail whose modulus exceeds the
/// resolution is accepted only when its turns are already closer than
/// resolution/2; the tail disk is then filled with a lattice. Spiral points
/// carry their parameter x.
PointSet sample_family(const FamilySpec& spec);

/// Smallest xMax that sample_family accepts for a spiral family.
double spiral_min_xmax(FamilyKind kind, double parameter, double resolution,
                       double stretch_grade = 1.0);

double oracle_spiral_box_dim(double a);
double oracle_spiral_spectrum(double a, double theta);
double oracle_spiral_rho(double a);

struct SequenceDims {
  double hausdorff;
  double box;
  double assouad;
};
SequenceDims oracle_sequence_dims(double p);

}  // namespace alab
