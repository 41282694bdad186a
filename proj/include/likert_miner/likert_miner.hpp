#pragma once

#include "association.hpp"
#include "clustering.hpp"
#include "config.hpp"
#include "correlation.hpp"
#include "dataset.hpp"
#include "eigen.hpp"
#include "error.hpp"
#include "factor.hpp"
#include "forest.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "random.hpp"
#include "reliability.hpp"
#include "report.hpp"
#include "summaries.hpp"
#include "synthetic.hpp"
#include "tree.hpp"
