package test.dit;

public class ClassF extends ClassC {
}
