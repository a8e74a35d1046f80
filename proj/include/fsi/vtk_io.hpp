#pragma once

#include <string>

#include "fsi/fields.hpp"

namespace fsi {

/// Legacy VTK ASCII snapshot with per-corner values so inter-element
/// discontinuities stay visible: u1, u2 on elastic triangles, phi on fluid
/// ones (zero on the other subdomain).
void write_vtk_snapshot(const DiscreteField& field, const std::string& path);

}  // namespace fsi
