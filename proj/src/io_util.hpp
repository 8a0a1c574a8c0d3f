#ifndef RAYS_SRC_IO_UTIL_HPP
#define RAYS_SRC_IO_UTIL_HPP

#include <string>

namespace rays::detail {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace rays::detail

#endif  // RAYS_SRC_IO_UTIL_HPP
