#pragma once

// On-disk formats. A homomorphism is stored as
//   {"n": int, "k": int, "d": int, "images": [[int, ...], ...]}
// with images[i][v] the image of vertex v under generator i.

#include <string>

#include "sofic/group.hpp"

namespace sofic {

std::string hom_to_json(const UniformHom& hom);
/// Validates the header fields against the images.
UniformHom hom_from_json(const std::string& text);

UniformHom load_hom(const std::string& path);
void save_hom(const std::string& path, const UniformHom& hom);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sofic
