namespace vertexq {}
