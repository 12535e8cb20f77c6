#include "sofic/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sofic/errors.hpp"

namespace sofic {

std::string hom_to_json(const UniformHom& hom) {
  nlohmann::json j;
  j["n"] = hom.n();
  j["k"] = hom.k();
  j["d"] = hom.d();
  j["images"] = hom.images();
  return j.dump();
}

UniformHom hom_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed instance JSON: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    const int d = j.at("d").get<int>();
    auto images = j.at("images").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(images.size()) != d) throw InputError("instance lists the wrong number of generators");
    for (const auto& image : images) {
      if (static_cast<int>(image.size()) != n) throw InputError("instance image has the wrong length");
    }
    return UniformHom::from_images(k, std::move(images));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid instance JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

UniformHom load_hom(const std::string& path) { return hom_from_json(read_text_file(path)); }

void save_hom(const std::string& path, const UniformHom& hom) { write_text_file(path, hom_to_json(hom) + "\n"); }

}  // namespace sofic
