package test.dcc;

public class ClassC {
}
