#pragma once

#include <string>

#include "confdim/system.hpp"

namespace test_support {

inline std::string gallery(const std::string& name) { return std::string(CONFDIM_SOURCE_DIR) + "/gallery/" + name + ".ifs"; }
inline std::string fixture(const std::string& name) {
    return std::string(CONFDIM_SOURCE_DIR) + "/tests/fixtures/" + name;
}
inline confdim::IfsSystem load(const std::string& name) { return confdim::load_system_file(gallery(name)); }

inline const char* const kGallery[] = {"cantor3", "full_interval", "overlap_pi", "overlap_golden", "moebius_cf"};

}  // namespace test_support
