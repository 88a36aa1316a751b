namespace magiso {}
