#pragma once

#include <span>
#include <utility>

#include "sbss/model.hpp"

namespace sbss {

/// Splits a region along a polyline that enters and leaves it exactly once.
/// The first part keeps `region.id()`, the second gets `second_id`.
///
/// Errors (validation):
///   "cut_does_not_separate"  the polyline does not fully cross the region
///   "ambiguous_cut"          the polyline crosses the region more than once
std::pair<Region, Region> split_region(const Region& region, std::span<const Point> cut,
                                       RegionId second_id);

/// Dissolves two regions sharing a boundary piece of positive length. The
/// result carries the smaller of the two ids.
///
/// Errors (validation):
///   "regions_not_adjacent"     no shared boundary of positive length
///   "merge_would_create_hole"  the union encloses a hole
Region merge_regions(const Region& a, const Region& b);

}  // namespace sbss
