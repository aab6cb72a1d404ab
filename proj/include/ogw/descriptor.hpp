#pragma once

#include "ogw/model.hpp"

#include <string>

namespace ogw {

// Text descriptor for a geometry/cohomology pair plus initial values. The
// serialization is canonical: identical models produce identical bytes.
std::string model_geometry_text(const Model& m);
std::string model_initial_text(const Model& m);

std::string save_descriptor(const Model& m); // full JSON document
Model load_descriptor_text(const std::string& text, const std::string& name);
Model load_descriptor_file(const std::string& path);

// Stable 64-bit FNV-1a digest, hex-encoded.
std::string digest_of(const std::string& text);

} // namespace ogw
