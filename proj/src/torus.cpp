#include "centeq/torus.hpp"

// all torus helpers are header-inline; this TU anchors the header in the build
