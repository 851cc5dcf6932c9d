#pragma once

#define HEATFLUX_VERSION_MAJOR 0
#define HEATFLUX_VERSION_MINOR 1
#define HEATFLUX_VERSION_PATCH 0
#define HEATFLUX_VERSION "0.1.0"
