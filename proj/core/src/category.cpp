/* Copyright 2026 The sca-eval Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "scaeval/category.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace scaeval {

std::string_view CategoryName(Category c) {
  switch (c) {
    case Category::kHuman: return "Human";
    case Category::kVehicle: return "Vehicle";
    case Category::kAnimal: return "Animal";
    case Category::kOther: return "Other";
  }
  return "Other";
}

Category ParseCategory(std::string_view label) {
  std::string lower(label);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  // nuScenes labels are dotted; the top-level class decides.
  const std::string head = lower.substr(0, lower.find('.'));
  if (head == "human" || head == "pedestrian") return Category::kHuman;
  if (head == "vehicle") return Category::kVehicle;
  if (head == "animal") return Category::kAnimal;
  return Category::kOther;
}

std::string_view CategoryFilterName(const CategoryFilter& filter) {
  return filter ? CategoryName(*filter) : std::string_view("All");
}

}  // namespace scaeval
