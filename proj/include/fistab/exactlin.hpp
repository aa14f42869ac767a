#pragma once

#include "fistab/exactlin/dense.hpp"
#include "fistab/exactlin/field.hpp"
#include "fistab/exactlin/smith.hpp"
#include "fistab/exactlin/sparse.hpp"
