#pragma once

#include "disjoint_paths.hpp"
#include "edge_list.hpp"
#include "embedding.hpp"
#include "graph_core.hpp"
#include "grid_extract.hpp"
#include "ray.hpp"
#include "rays_ends.hpp"
#include "star_comb.hpp"
#include "subdivision_check.hpp"
