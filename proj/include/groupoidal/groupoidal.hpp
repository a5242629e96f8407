#pragma once

#include "cap.hpp"
#include "cohomology.hpp"
#include "error.hpp"
#include "groupoid.hpp"
#include "homology.hpp"
#include "lattice.hpp"
#include "limits.hpp"
#include "matrix.hpp"
#include "models.hpp"
#include "nerve.hpp"
#include "parallel.hpp"
#include "skew.hpp"
#include "snf.hpp"
#include "zlinalg.hpp"
