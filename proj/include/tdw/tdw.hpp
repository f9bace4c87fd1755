#pragma once

// Umbrella header for the trajectory data warehouse toolkit.

#include "tdw/common.hpp"
#include "tdw/csv.hpp"
#include "tdw/geo.hpp"
#include "tdw/io.hpp"
#include "tdw/itinerary.hpp"
#include "tdw/model.hpp"
#include "tdw/oracle.hpp"
#include "tdw/query.hpp"
#include "tdw/rng.hpp"
#include "tdw/segmentation.hpp"
#include "tdw/time.hpp"
#include "tdw/trajgen.hpp"
#include "tdw/warehouse.hpp"
