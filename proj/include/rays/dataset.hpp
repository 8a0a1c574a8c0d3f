#ifndef RAYS_DATASET_HPP
#define RAYS_DATASET_HPP

#include "rays/types.hpp"

#include <string>
#include <vector>

namespace rays {

// Dataset CSV: no header; each row is an integer label followed by the
// features, all in [0,1]. Row order is preserved.
std::vector<Example<double>> load_dataset(const std::string& path);
std::vector<Example<double>> parse_dataset(const std::string& csv_text);
std::string dump_dataset(const std::vector<Example<double>>& examples);
void save_dataset(const std::vector<Example<double>>& examples, const std::string& path);

}  // namespace rays

#endif  // RAYS_DATASET_HPP
