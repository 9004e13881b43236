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

#ifndef SCAEVAL_CATEGORY_HPP_
#define SCAEVAL_CATEGORY_HPP_

#include <array>
#include <optional>
#include <string_view>

namespace scaeval {

// Semantic-critical actor classes. Anything that is not a human, vehicle or
// animal lands in kOther.
enum class Category { kHuman, kVehicle, kAnimal, kOther };

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::kHuman, Category::kVehicle, Category::kAnimal, Category::kOther};

std::string_view CategoryName(Category c);

// Accepts the short names used in native files ("Human", "vehicle", ...) and
// nuScenes dotted labels ("human.pedestrian.adult", "vehicle.car").
// Unrecognized labels map to kOther.
Category ParseCategory(std::string_view label);

// `std::nullopt` selects every category ("All" rows).
using CategoryFilter = std::optional<Category>;

std::string_view CategoryFilterName(const CategoryFilter& filter);

}  // namespace scaeval

#endif  // SCAEVAL_CATEGORY_HPP_
