#pragma once

#include "qsum/context.hpp"
#include "qsum/errors.hpp"
#include "qsum/euler.hpp"
#include "qsum/formal.hpp"
#include "qsum/io.hpp"
#include "qsum/kernel.hpp"
#include "qsum/logpoint.hpp"
#include "qsum/newton.hpp"
#include "qsum/product.hpp"
#include "qsum/qdiff_operator.hpp"
#include "qsum/quad.hpp"
#include "qsum/rational.hpp"
#include "qsum/series.hpp"
