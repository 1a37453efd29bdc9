#pragma once

// Recorded-data protocol: load a range-cell x pulse cube, slide length-N windows
// with one pulse of overlap to extract CUT/secondary snapshots, and estimate
// empirical Pfa/Pd (with synthetic target injection) on the recorded returns.

#include <functional>
#include <string>
#include <vector>

#include "cfarfp/boundary.hpp"
#include "cfarfp/invariant_stats.hpp"
#include "cfarfp/montecarlo.hpp"

namespace cfarfp {

struct DataCube {
    int cells = 0;
    int pulses = 0;
    std::vector<cxd> samples;  // row-major cells x pulses

    cxd at(int cell, int pulse) const {
        return samples[static_cast<size_t>(cell) * pulses + pulse];
    }
};

enum class CubeFormat { csv, binary };

// CSV: one row per range cell, alternating real,imag columns.
// Binary: little-endian uint32 cells, uint32 pulses, then float32 re/im pairs
// row-major.
DataCube load_cube(const std::string& path, CubeFormat format);
void save_cube(const DataCube& cube, const std::string& path, CubeFormat format);

// Synthetic cube drawn from the clutter model (stand-in for recorded data).
DataCube synthesize_cube(int cells, int pulses, const ClutterModel& cm, uint64_t seed);

// Window start pulses: stride N-1 (consecutive windows share exactly one pulse),
// plus a tail-anchored final window when leftover pulses remain so every return
// is used. Count is ceil((pulses-N)/(N-1)) + 1.
std::vector<int> window_starts(int pulses, int n);

// Calls fn(z, secondaries) for every window; z from the CUT cell, z_1..z_K from
// the k/2 flanking cells on each side at the same pulse window.
void for_each_snapshot(const DataCube& cube, int cut_cell, const ProblemDims& dims,
                       const std::function<void(const ComplexVec&,
                                                const std::vector<ComplexVec>&)>& fn);

// Fraction of snapshots deciding H1.
Estimate empirical_pfa_on_cube(const DataCube& cube, const Boundary& b, int cut_cell,
                               const ProblemDims& dims);

// Pd with a synthetic target alpha*v injected into the CUT snapshot only; the
// amplitude is calibrated per window against the sample covariance of the
// secondaries (the true covariance being unknown on recorded data).
Estimate empirical_pd_on_cube(const DataCube& cube, const Boundary& b, int cut_cell,
                              const ProblemDims& dims, double gamma, double f_d,
                              uint64_t seed);

}  // namespace cfarfp
