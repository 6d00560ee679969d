#pragma once

#include <string>
#include <vector>

#include "rept/deformation.hpp"
#include "rept/memory_kernel.hpp"
#include "rept/spectral.hpp"

namespace rept {

// Field snapshots: one text header line ending in '\n', then the payload as
// flat little-endian 64-bit floats in the field's native layout.
void write_snapshot(const std::string& path, const std::string& header,
                    const std::vector<double>& data);

struct Snapshot {
    std::string header;
    std::vector<double> data;
};
Snapshot read_snapshot(const std::string& path);

void write_kernel_snapshot(const std::string& path, const KernelField& k);
void write_deformation_snapshot(const std::string& path, const DeformationField& g);
void write_stress_snapshot(const std::string& path, const Tensor2Field& sigma);
void write_velocity_snapshot(const std::string& path, const VectorField& v);

}  // namespace rept
