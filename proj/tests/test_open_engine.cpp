#include "ogw/open_engine.hpp"
#include <doctest.h>
